#include "forge/transform.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace forge {

// -- Tseitin ------------------------------------------------------------

namespace {

// Constant folding; the result contains Const only if it *is* a constant.
Formula fold(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
    case K::Const:
    case K::Var:
        return f;
    case K::Not: {
        Formula c = fold(f.operands()[0]);
        if (c.kind() == K::Const)
            return Formula::constant(!c.const_value());
        return Formula::negate(std::move(c));
    }
    case K::And:
    case K::Or: {
        bool is_and = f.kind() == K::And;
        std::vector<Formula> kids;
        for (auto& k : f.operands()) {
            Formula c = fold(k);
            if (c.kind() == K::Const) {
                if (c.const_value() != is_and)
                    return c; // absorbing element
                continue;     // neutral element
            }
            kids.push_back(std::move(c));
        }
        if (kids.empty())
            return Formula::constant(is_and);
        if (kids.size() == 1)
            return kids[0];
        return is_and ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
    }
    case K::Xor:
    case K::Iff: {
        bool is_iff = f.kind() == K::Iff;
        Formula a = fold(f.operands()[0]);
        Formula b = fold(f.operands()[1]);
        auto with_const = [&](bool cv, Formula other) {
            // xor false = id, xor true = not; iff swaps the roles
            bool negate = is_iff ? !cv : cv;
            if (other.kind() == K::Const)
                return Formula::constant(negate ? !other.const_value() : other.const_value());
            return negate ? Formula::negate(std::move(other)) : other;
        };
        if (a.kind() == K::Const)
            return with_const(a.const_value(), std::move(b));
        if (b.kind() == K::Const)
            return with_const(b.const_value(), std::move(a));
        return is_iff ? Formula::iff(std::move(a), std::move(b))
                      : Formula::exclusive_or(std::move(a), std::move(b));
    }
    }
    return f;
}

struct GateEmitter {
    Cnf cnf;
    AuxTag tag;

    void clause(std::vector<Lit> lits) {
        // definitional clauses over repeated inputs can be tautologous and
        // thus vacuous; skip them
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        for (size_t i = 1; i < lits.size(); ++i)
            if (lits[i].var() == lits[i - 1].var())
                return;
        cnf.add_clause(Clause(std::move(lits)));
    }

    Var fresh() {
        Var g = cnf.fresh_var();
        cnf.register_aux(g, tag);
        return g;
    }

    // emits the definitional clauses for gate_lit <=> op(kids)
    void define(Lit gate, Formula::Kind op, const std::vector<Lit>& kids) {
        using K = Formula::Kind;
        if (op == K::And) {
            std::vector<Lit> big = {gate};
            for (Lit k : kids) {
                clause({-gate, k});
                big.push_back(-k);
            }
            clause(std::move(big));
        } else if (op == K::Or) {
            std::vector<Lit> big = {-gate};
            for (Lit k : kids)
                big.push_back(k);
            clause(std::move(big));
            for (Lit k : kids)
                clause({gate, -k});
        } else if (op == K::Xor) {
            Lit a = kids[0], b = kids[1];
            clause({-gate, a, b});
            clause({-gate, -a, -b});
            clause({gate, -a, b});
            clause({gate, a, -b});
        } else { // Iff
            Lit a = kids[0], b = kids[1];
            clause({-gate, -a, b});
            clause({-gate, a, -b});
            clause({gate, a, b});
            clause({gate, -a, -b});
        }
    }

    // returns the literal computing f, allocating gate variables bottom-up
    Lit encode(const Formula& f) {
        using K = Formula::Kind;
        switch (f.kind()) {
        case K::Var:
            return Lit(f.variable(), true);
        case K::Not:
            return -encode(f.operands()[0]);
        case K::Const:
            throw Error("constants must be folded before encoding");
        default: {
            std::vector<Lit> kids;
            kids.reserve(f.operands().size());
            for (auto& k : f.operands())
                kids.push_back(encode(k));
            Lit gate(fresh(), true);
            define(gate, f.kind(), kids);
            return gate;
        }
        }
    }
};

} // namespace

Cnf tseitin(const Formula& formula) {
    Formula f = fold(formula);
    GateEmitter em{Cnf(formula.max_var()), AuxTag::Tseitin};
    if (f.kind() == Formula::Kind::Const) {
        if (!f.const_value())
            em.cnf.add_clause(Clause({}));
        return em.cnf;
    }
    Lit root = em.encode(f);
    em.clause({root});
    return em.cnf;
}

// -- Extension rule -------------------------------------------------------

Cnf extend(const Cnf& cnf, Lit l1, Lit l2) {
    if (l1.var() > cnf.universe() || l2.var() > cnf.universe())
        throw Error("extension literals must range over the CNF's variables");
    Cnf out = cnf;
    Lit x(out.fresh_var(), true);
    out.register_aux(x.var(), AuxTag::Extension);
    GateEmitter em{std::move(out), AuxTag::Extension};
    em.clause({-x, l1, l2});
    em.clause({x, -l1});
    em.clause({x, -l2});
    return em.cnf;
}

Cnf extend_general(const Cnf& cnf, const Formula& alpha) {
    if (alpha.max_var() > cnf.universe())
        throw Error("alpha must range over the CNF's variables");
    Formula a = fold(alpha);
    GateEmitter em{cnf, AuxTag::Extension};
    Lit y(em.fresh(), true);
    using K = Formula::Kind;
    if (a.kind() == K::Const) {
        em.clause({a.const_value() ? y : -y});
        return em.cnf;
    }
    // strip negations so the top connective (if any) is defined by Y itself
    Lit ylit = y;
    while (a.kind() == K::Not) {
        ylit = -ylit;
        a = a.operands()[0];
    }
    if (a.kind() == K::Var) {
        Lit l(a.variable(), true);
        em.clause({-ylit, l});
        em.clause({ylit, -l});
        return em.cnf;
    }
    std::vector<Lit> kids;
    for (auto& k : a.operands())
        kids.push_back(em.encode(k));
    em.define(ylit, a.kind(), kids);
    return em.cnf;
}

// -- Bounded variable addition ---------------------------------------------

namespace {

using ClauseKey = std::vector<int>; // sorted dimacs codes

struct KeyHash {
    size_t operator()(const ClauseKey& k) const {
        size_t h = 1469598103934665603ull;
        for (int x : k) {
            h ^= static_cast<size_t>(x);
            h *= 1099511628211ull;
        }
        return h;
    }
};

ClauseKey key_of(const Clause& c) {
    ClauseKey k;
    k.reserve(c.size());
    for (Lit l : c)
        k.push_back(l.to_dimacs());
    std::sort(k.begin(), k.end());
    return k;
}

ClauseKey key_without(const Clause& c, Lit drop) {
    ClauseKey k;
    k.reserve(c.size());
    for (Lit l : c)
        if (l != drop)
            k.push_back(l.to_dimacs());
    std::sort(k.begin(), k.end());
    return k;
}

struct BvaIndex {
    // distinct clauses, in first-occurrence order
    std::vector<Clause> clauses;
    std::unordered_map<ClauseKey, int, KeyHash> by_key;
    // key(C \ l) -> list of (clause index, removed literal)
    std::unordered_map<ClauseKey, std::vector<std::pair<int, Lit>>, KeyHash> minus_one;
    // occurrence counts over distinct clauses, by Lit::index
    std::map<int, int> occurrences;
    std::vector<Lit> lit_of_index;

    explicit BvaIndex(const Cnf& cnf) {
        for (auto& c : cnf.clauses()) {
            ClauseKey k = key_of(c);
            if (by_key.emplace(k, static_cast<int>(clauses.size())).second)
                clauses.push_back(c);
        }
        for (int i = 0; i < static_cast<int>(clauses.size()); ++i)
            for (Lit l : clauses[i]) {
                minus_one[key_without(clauses[i], l)].emplace_back(i, l);
                if (occurrences.emplace(l.index(), 1).second == false)
                    ++occurrences[l.index()];
            }
        lit_of_index.resize(2 * (cnf.universe() + 1));
        for (int i = 0; i < static_cast<int>(clauses.size()); ++i)
            for (Lit l : clauses[i])
                lit_of_index[l.index()] = l;
    }
};

struct Candidate {
    Lit lit;
    std::vector<int> matched; // indices into index.clauses, ascending
};

// all literals k (not the seed, not in taken) with (C \ seed) + k present,
// grouped with their matched clause lists
std::map<int, Candidate> candidates_for(const BvaIndex& ix, Lit seed,
                                        const std::vector<int>& m_cls,
                                        const std::map<int, int>& taken) {
    std::map<int, Candidate> out;
    for (int ci : m_cls) {
        ClauseKey base = key_without(ix.clauses[ci], seed);
        auto it = ix.minus_one.find(base);
        if (it == ix.minus_one.end())
            continue;
        for (auto& [other, k] : it->second) {
            if (k == seed || taken.count(k.index()))
                continue;
            auto [slot, fresh] = out.try_emplace(k.index(), Candidate{k, {}});
            slot->second.matched.push_back(ci);
        }
    }
    return out;
}

int reduction_of(int lits, int clauses) { return lits * clauses - (lits + clauses); }

std::optional<BvaMatch> try_seed(const BvaIndex& ix, Lit seed) {
    std::vector<int> m_cls;
    for (int i = 0; i < static_cast<int>(ix.clauses.size()); ++i)
        if (ix.clauses[i].contains(seed))
            m_cls.push_back(i);
    if (m_cls.empty())
        return std::nullopt;

    std::vector<Lit> m_lit = {seed};
    std::map<int, int> taken = {{seed.index(), 1}};
    int current = reduction_of(1, static_cast<int>(m_cls.size()));
    auto cands = candidates_for(ix, seed, m_cls, taken);

    while (!cands.empty()) {
        // best candidate: max matched count, ties by literal index
        auto best = cands.begin();
        for (auto it = std::next(cands.begin()); it != cands.end(); ++it)
            if (it->second.matched.size() > best->second.matched.size())
                best = it;
        int count = static_cast<int>(best->second.matched.size());
        int next = reduction_of(static_cast<int>(m_lit.size()) + 1, count);
        if (next <= current)
            break;
        current = next;
        m_lit.push_back(best->second.lit);
        taken[best->second.lit.index()] = 1;
        if (count < static_cast<int>(m_cls.size())) {
            m_cls = best->second.matched;
            cands = candidates_for(ix, seed, m_cls, taken);
        } else {
            cands.erase(best);
        }
    }

    if (m_lit.size() < 2 || current < 0)
        return std::nullopt;

    // the grid must consist of distinct present clauses for the clause
    // accounting to be exact; collisions are possible and disqualify the seed
    std::unordered_map<ClauseKey, int, KeyHash> grid;
    for (int ci : m_cls)
        for (Lit l : m_lit) {
            ClauseKey k = key_without(ix.clauses[ci], seed);
            k.push_back(l.to_dimacs());
            std::sort(k.begin(), k.end());
            if (!ix.by_key.count(k) || !grid.emplace(std::move(k), 1).second)
                return std::nullopt;
        }

    BvaMatch m;
    m.matched_literals = std::move(m_lit);
    for (int ci : m_cls)
        m.matched_clauses.push_back(ix.clauses[ci]);
    m.reduction = current;
    return m;
}

} // namespace

std::optional<BvaStepResult> bva_step(const Cnf& cnf) {
    BvaIndex ix(cnf);

    // seeds by occurrence count descending, ties by literal index
    std::vector<std::pair<int, int>> seeds; // (-count, lit index)
    for (auto& [li, count] : ix.occurrences)
        seeds.emplace_back(-count, li);
    std::sort(seeds.begin(), seeds.end());

    for (auto& [negc, li] : seeds) {
        auto match = try_seed(ix, ix.lit_of_index[li]);
        if (!match)
            continue;

        Lit seed = match->matched_literals[0];
        std::unordered_map<ClauseKey, int, KeyHash> to_delete;
        for (auto& c : match->matched_clauses)
            for (Lit l : match->matched_literals) {
                ClauseKey k = key_without(c, seed);
                k.push_back(l.to_dimacs());
                std::sort(k.begin(), k.end());
                ++to_delete[k];
            }

        Cnf out(cnf.universe());
        for (auto& [v, t] : cnf.aux_registry())
            out.register_aux(v, t);
        Lit x(out.fresh_var(), true);
        out.register_aux(x.var(), AuxTag::Bva);

        for (auto& c : cnf.clauses()) {
            auto it = to_delete.find(key_of(c));
            if (it != to_delete.end() && it->second > 0) {
                --it->second;
                continue;
            }
            out.add_clause(c);
        }
        for (Lit l : match->matched_literals) {
            std::vector<Lit> lits = {l, x};
            out.add_clause(Clause(std::move(lits)));
        }
        for (auto& c : match->matched_clauses) {
            std::vector<Lit> lits;
            for (Lit l : c)
                if (l != seed)
                    lits.push_back(l);
            lits.push_back(-x);
            out.add_clause(Clause(std::move(lits)));
        }
        return BvaStepResult{std::move(out), std::move(*match)};
    }
    return std::nullopt;
}

Cnf bva(const Cnf& cnf, int max_steps) { return bva_counted(cnf, max_steps, nullptr); }

Cnf bva_counted(const Cnf& cnf, int max_steps, int* steps_applied) {
    if (max_steps < 0)
        throw Error("max_steps must be nonnegative");
    Cnf cur = cnf;
    int steps = 0;
    while (steps < max_steps) {
        auto step = bva_step(cur);
        if (!step)
            break;
        cur = std::move(step->cnf);
        ++steps;
    }
    if (steps_applied)
        *steps_applied = steps;
    return cur;
}

} // namespace forge
