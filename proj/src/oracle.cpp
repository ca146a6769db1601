#include "forge/oracle.hpp"

#include <algorithm>

#include "forge/detail/bitchunks.hpp"

namespace forge {

namespace {

size_t words_for(int n) { return n >= 6 ? (size_t(1) << (n - 6)) : 1; }

void check_var_cap(size_t n) {
    if (n > TruthOracle::kMaxVars)
        throw LimitError("oracle limited to " + std::to_string(TruthOracle::kMaxVars) +
                         " variables, got " + std::to_string(n));
}

// position lookup: var -> shift (n-1-position), -1 when absent
std::vector<int> shifts_for(const std::vector<Var>& vars) {
    Var max_var = 0;
    for (Var v : vars)
        max_var = std::max(max_var, v);
    std::vector<int> shift(max_var + 1, -1);
    int n = static_cast<int>(vars.size());
    for (int p = 0; p < n; ++p) {
        Var v = vars[p];
        if (v < 1)
            throw Error("oracle variables must be positive");
        if (shift[v] != -1)
            throw Error("duplicate variable " + std::to_string(v) + " in oracle list");
        shift[v] = n - 1 - p;
    }
    return shift;
}

template <typename ChunkFn>
TruthOracle materialize(std::vector<Var> vars, ChunkFn&& chunk) {
    check_var_cap(vars.size());
    int n = static_cast<int>(vars.size());
    uint64_t total = uint64_t(1) << n;
    std::vector<uint64_t> table(words_for(n), 0);
    for (uint64_t base = 0; base < total; base += 64)
        table[base / 64] = chunk(base) & detail::chunk_mask(total, base);
    return TruthOracle(std::move(vars), std::move(table));
}

} // namespace

TruthOracle::TruthOracle(std::vector<Var> vars, std::vector<uint64_t> table)
    : vars_(std::move(vars)), table_(std::move(table)) {
    check_var_cap(vars_.size());
    shifts_for(vars_); // validates positivity and uniqueness
    if (table_.size() != words_for(static_cast<int>(vars_.size())))
        throw Error("truth table size does not match variable count");
    if (vars_.size() < 6)
        table_[0] &= detail::chunk_mask(num_assignments(), 0);
}

TruthOracle TruthOracle::from_function(
    std::vector<Var> vars, const std::function<bool(const std::vector<bool>&)>& eval) {
    check_var_cap(vars.size());
    int n = static_cast<int>(vars.size());
    uint64_t total = uint64_t(1) << n;
    std::vector<uint64_t> table(words_for(n), 0);
    std::vector<bool> bits(n);
    for (uint64_t i = 0; i < total; ++i) {
        for (int p = 0; p < n; ++p)
            bits[p] = (i >> (n - 1 - p)) & 1;
        if (eval(bits))
            table[i / 64] |= uint64_t(1) << (i % 64);
    }
    return TruthOracle(std::move(vars), std::move(table));
}

bool TruthOracle::value(uint64_t i) const {
    if (i >= num_assignments())
        throw Error("assignment index out of range");
    return (table_[i / 64] >> (i % 64)) & 1;
}

bool TruthOracle::eval(const std::vector<bool>& assignment) const {
    if (assignment.size() != vars_.size())
        throw Error("assignment length mismatch");
    uint64_t i = 0;
    for (bool b : assignment)
        i = (i << 1) | (b ? 1 : 0);
    return value(i);
}

TruthOracle TruthOracle::reordered(const std::vector<Var>& new_vars) const {
    if (new_vars.size() != vars_.size())
        throw Error("reordered requires the same variable set");
    auto old_shift = shifts_for(vars_);
    int n = static_cast<int>(vars_.size());
    std::vector<int> from_shift(n); // new position p draws from this old shift
    for (int p = 0; p < n; ++p) {
        Var v = new_vars[p];
        if (v >= static_cast<Var>(old_shift.size()) || v < 1 || old_shift[v] < 0)
            throw Error("reordered requires the same variable set");
        from_shift[p] = old_shift[v];
    }
    uint64_t total = num_assignments();
    std::vector<uint64_t> table(table_.size(), 0);
    for (uint64_t j = 0; j < total; ++j) {
        uint64_t i = 0;
        for (int p = 0; p < n; ++p)
            if ((j >> (n - 1 - p)) & 1)
                i |= uint64_t(1) << from_shift[p];
        if (value(i))
            table[j / 64] |= uint64_t(1) << (j % 64);
    }
    return TruthOracle(new_vars, std::move(table));
}

// -- Builders ----------------------------------------------------------------

TruthOracle oracle_of(const Cnf& cnf) {
    std::vector<Var> vars;
    vars.reserve(cnf.universe());
    for (Var v = 1; v <= cnf.universe(); ++v)
        vars.push_back(v);
    return oracle_of(cnf, std::move(vars));
}

TruthOracle oracle_of(const Cnf& cnf, std::vector<Var> vars) {
    check_var_cap(vars.size());
    auto shift = shifts_for(vars);
    for (auto& c : cnf.clauses())
        for (Lit l : c)
            if (l.var() >= static_cast<Var>(shift.size()) || shift[l.var()] < 0)
                throw Error("clause variable " + std::to_string(l.var()) +
                            " missing from oracle variable list");
    return materialize(std::move(vars), [&](uint64_t base) {
        uint64_t w = ~uint64_t(0);
        for (auto& c : cnf.clauses()) {
            uint64_t cw = 0;
            for (Lit l : c) {
                uint64_t vw = detail::var_word(shift[l.var()], base);
                cw |= l.positive() ? vw : ~vw;
            }
            w &= cw;
            if (!w)
                break;
        }
        return w;
    });
}

TruthOracle oracle_of(const NnfDag& dag) {
    return oracle_of(dag, dag.mentioned().to_vector());
}

TruthOracle oracle_of(const NnfDag& dag, std::vector<Var> vars) {
    check_var_cap(vars.size());
    auto shift = shifts_for(vars);
    for (Var v : dag.mentioned().to_vector())
        if (v >= static_cast<Var>(shift.size()) || shift[v] < 0)
            throw Error("dag variable " + std::to_string(v) +
                        " missing from oracle variable list");
    std::vector<uint64_t> val(dag.size());
    return materialize(std::move(vars), [&](uint64_t base) {
        for (size_t i = 0; i < dag.size(); ++i) {
            const NnfNode& n = dag.node(i);
            switch (n.kind) {
            case NnfKind::Literal: {
                uint64_t vw = detail::var_word(shift[n.lit.var()], base);
                val[i] = n.lit.positive() ? vw : ~vw;
                break;
            }
            case NnfKind::True:
                val[i] = ~uint64_t(0);
                break;
            case NnfKind::False:
                val[i] = 0;
                break;
            case NnfKind::And: {
                uint64_t w = ~uint64_t(0);
                for (int c : n.children)
                    w &= val[c];
                val[i] = w;
                break;
            }
            case NnfKind::Or: {
                uint64_t w = 0;
                for (int c : n.children)
                    w |= val[c];
                val[i] = w;
                break;
            }
            }
        }
        return val[dag.root()];
    });
}

namespace {

uint64_t formula_word(const Formula& f, const std::vector<int>& shift, uint64_t base) {
    switch (f.kind()) {
    case Formula::Kind::Const:
        return f.const_value() ? ~uint64_t(0) : 0;
    case Formula::Kind::Var:
        return detail::var_word(shift[f.variable()], base);
    case Formula::Kind::Not:
        return ~formula_word(f.operands()[0], shift, base);
    case Formula::Kind::And: {
        uint64_t w = ~uint64_t(0);
        for (auto& k : f.operands())
            w &= formula_word(k, shift, base);
        return w;
    }
    case Formula::Kind::Or: {
        uint64_t w = 0;
        for (auto& k : f.operands())
            w |= formula_word(k, shift, base);
        return w;
    }
    case Formula::Kind::Xor:
        return formula_word(f.operands()[0], shift, base) ^
               formula_word(f.operands()[1], shift, base);
    case Formula::Kind::Iff:
        return ~(formula_word(f.operands()[0], shift, base) ^
                 formula_word(f.operands()[1], shift, base));
    }
    return 0;
}

void collect_formula_vars(const Formula& f, std::vector<Var>& out) {
    if (f.kind() == Formula::Kind::Var)
        out.push_back(f.variable());
    for (auto& k : f.operands())
        collect_formula_vars(k, out);
}

} // namespace

TruthOracle oracle_of(const Formula& f) {
    std::vector<Var> vars;
    collect_formula_vars(f, vars);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return oracle_of(f, std::move(vars));
}

TruthOracle oracle_of(const Formula& f, std::vector<Var> vars) {
    check_var_cap(vars.size());
    auto shift = shifts_for(vars);
    std::vector<Var> mentioned;
    collect_formula_vars(f, mentioned);
    for (Var v : mentioned)
        if (v >= static_cast<Var>(shift.size()) || shift[v] < 0)
            throw Error("formula variable " + std::to_string(v) +
                        " missing from oracle variable list");
    return materialize(std::move(vars),
                       [&](uint64_t base) { return formula_word(f, shift, base); });
}

// -- Operations ---------------------------------------------------------------

TruthOracle oracle_forget(const TruthOracle& o, const std::vector<Var>& vars) {
    VarSet drop(o.variables().empty() ? 1 : *std::max_element(o.variables().begin(),
                                                              o.variables().end()));
    for (Var v : vars) {
        bool listed = std::find(o.variables().begin(), o.variables().end(), v) !=
                      o.variables().end();
        if (!listed)
            throw Error("cannot forget variable " + std::to_string(v) +
                        ": not in oracle variable list");
        drop.add(v);
    }
    int n = o.num_vars();
    std::vector<Var> kept;
    std::vector<int> kept_shift_out, kept_shift_in;
    for (int p = 0; p < n; ++p)
        if (!drop.contains(o.variables()[p]))
            kept.push_back(o.variables()[p]);
    int m = static_cast<int>(kept.size());
    std::vector<std::pair<int, int>> moves; // (in shift, out shift)
    {
        int q = 0;
        for (int p = 0; p < n; ++p)
            if (!drop.contains(o.variables()[p]))
                moves.emplace_back(n - 1 - p, m - 1 - q++);
    }
    uint64_t total = o.num_assignments();
    std::vector<uint64_t> table(words_for(m), 0);
    for (uint64_t i = 0; i < total; ++i) {
        if (!o.value(i))
            continue;
        uint64_t j = 0;
        for (auto [si, so] : moves)
            if ((i >> si) & 1)
                j |= uint64_t(1) << so;
        table[j / 64] |= uint64_t(1) << (j % 64);
    }
    return TruthOracle(std::move(kept), std::move(table));
}

TruthOracle oracle_condition(const TruthOracle& o, const std::vector<Lit>& lits) {
    int n = o.num_vars();
    std::vector<int> fixed(n, -1); // -1 free, 0/1 fixed
    for (Lit l : lits) {
        auto it = std::find(o.variables().begin(), o.variables().end(), l.var());
        if (it == o.variables().end())
            throw Error("cannot condition on variable " + std::to_string(l.var()) +
                        ": not in oracle variable list");
        int p = static_cast<int>(it - o.variables().begin());
        int want = l.positive() ? 1 : 0;
        if (fixed[p] != -1 && fixed[p] != want)
            throw Error("contradictory literal set: variable " + std::to_string(l.var()));
        fixed[p] = want;
    }
    std::vector<Var> kept;
    for (int p = 0; p < n; ++p)
        if (fixed[p] == -1)
            kept.push_back(o.variables()[p]);
    int m = static_cast<int>(kept.size());
    uint64_t total_out = uint64_t(1) << m;
    std::vector<uint64_t> table(words_for(m), 0);
    for (uint64_t j = 0; j < total_out; ++j) {
        uint64_t i = 0;
        int q = 0;
        for (int p = 0; p < n; ++p) {
            int bit = fixed[p] != -1 ? fixed[p]
                                     : static_cast<int>((j >> (m - 1 - q++)) & 1);
            i = (i << 1) | bit;
        }
        if (o.value(i))
            table[j / 64] |= uint64_t(1) << (j % 64);
    }
    return TruthOracle(std::move(kept), std::move(table));
}

bool emf_check(const TruthOracle& f, const TruthOracle& g) {
    for (Var v : f.variables())
        if (std::find(g.variables().begin(), g.variables().end(), v) == g.variables().end())
            throw Error("emf_check: f mentions variable " + std::to_string(v) +
                        " unknown to g");
    std::vector<Var> aux;
    for (Var v : g.variables())
        if (std::find(f.variables().begin(), f.variables().end(), v) == f.variables().end())
            aux.push_back(v);
    TruthOracle h = oracle_forget(g, aux);
    if (h.variables() != f.variables())
        h = h.reordered(f.variables());
    return h.table() == f.table();
}

uint64_t oracle_count(const TruthOracle& o) {
    uint64_t c = 0;
    for (uint64_t w : o.table())
        c += __builtin_popcountll(w);
    return c;
}

bool oracle_equiv(const TruthOracle& a, const TruthOracle& b) {
    if (a.variables() != b.variables())
        throw Error("oracle_equiv requires identical variable lists");
    return a.table() == b.table();
}

} // namespace forge
