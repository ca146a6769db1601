#include "forge/nnf.hpp"

#include <algorithm>
#include <climits>
#include <fstream>
#include <map>
#include <sstream>

#include "forge/detail/bitchunks.hpp"

namespace forge {

NnfDag::NnfDag(std::vector<NnfNode> nodes, int root, Var var_count)
    : nodes_(std::move(nodes)), root_(root), var_count_(var_count) {
    if (nodes_.empty() || root < 0 || root >= static_cast<int>(nodes_.size()))
        throw Error("NNF dag requires a root within a nonempty arena");
    var_sets_.reserve(nodes_.size());
    for (size_t i = 0; i < nodes_.size(); ++i) {
        const NnfNode& n = nodes_[i];
        VarSet s(var_count_);
        switch (n.kind) {
        case NnfKind::Literal:
            if (n.lit.var() < 1 || n.lit.var() > var_count_)
                throw Error("literal variable " + std::to_string(n.lit.var()) +
                            " outside declared count " + std::to_string(var_count_));
            s.add(n.lit.var());
            break;
        case NnfKind::And:
        case NnfKind::Or:
            if (n.children.empty())
                throw Error("And/Or node with no children");
            for (int c : n.children) {
                if (c < 0 || c >= static_cast<int>(i))
                    throw Error("child id " + std::to_string(c) +
                                " violates arena order at node " + std::to_string(i));
                s.unite(var_sets_[c]);
            }
            break;
        default:
            break;
        }
        var_sets_.push_back(std::move(s));
    }
}

namespace {

std::vector<char> reachable_from_root(const NnfDag& dag) {
    std::vector<char> seen(dag.size(), 0);
    std::vector<int> stack = {dag.root()};
    seen[dag.root()] = 1;
    while (!stack.empty()) {
        int id = stack.back();
        stack.pop_back();
        for (int c : dag.node(id).children)
            if (!seen[c]) {
                seen[c] = 1;
                stack.push_back(c);
            }
    }
    return seen;
}

} // namespace

// -- File format ---------------------------------------------------------

NnfDag parse_nnf(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    long v = -1, e = -1, n = -1;
    std::vector<NnfNode> nodes;
    long edges_seen = 0;

    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "c")
            continue;
        if (tag == "nnf") {
            if (v >= 0)
                throw ParseError("duplicate nnf header");
            if (!(ls >> v >> e >> n) || v < 0 || e < 0 || n < 0)
                throw ParseError("malformed nnf header: " + line);
            continue;
        }
        if (v < 0)
            throw ParseError("node line before nnf header");
        int id = static_cast<int>(nodes.size());
        if (id >= v)
            throw ParseError("more nodes than header declares");
        auto read_children = [&](long count) {
            std::vector<int> kids;
            kids.reserve(count);
            for (long k = 0; k < count; ++k) {
                long c;
                if (!(ls >> c))
                    throw ParseError("truncated node line: " + line);
                if (c < 0 || c >= id)
                    throw ParseError("forward or invalid reference " + std::to_string(c) +
                                     " at node " + std::to_string(id));
                kids.push_back(static_cast<int>(c));
            }
            return kids;
        };
        if (tag == "L") {
            long code;
            if (!(ls >> code) || code == 0)
                throw ParseError("malformed literal line: " + line);
            if (code > n || -code > n)
                throw ParseError("literal " + std::to_string(code) +
                                 " exceeds declared variable count");
            nodes.push_back(NnfNode::literal(Lit::from_dimacs(static_cast<int>(code))));
        } else if (tag == "A") {
            long count;
            if (!(ls >> count) || count < 0)
                throw ParseError("malformed And line: " + line);
            if (count == 0) {
                nodes.push_back(NnfNode::true_node());
            } else {
                nodes.push_back(NnfNode::and_node(read_children(count)));
                edges_seen += count;
            }
        } else if (tag == "O") {
            long dec, count;
            if (!(ls >> dec >> count) || count < 0 || dec < 0 || dec > n)
                throw ParseError("malformed Or line: " + line);
            if (count == 0) {
                if (dec != 0)
                    throw ParseError("empty Or with a decision variable: " + line);
                nodes.push_back(NnfNode::false_node());
            } else {
                nodes.push_back(NnfNode::or_node(read_children(count), static_cast<Var>(dec)));
                edges_seen += count;
            }
        } else {
            throw ParseError("unknown node tag '" + tag + "'");
        }
        std::string rest;
        if (ls >> rest)
            throw ParseError("trailing tokens on node line: " + line);
    }
    if (v < 0)
        throw ParseError("missing nnf header");
    if (static_cast<long>(nodes.size()) != v)
        throw ParseError("node count mismatch: header says " + std::to_string(v) + ", found " +
                         std::to_string(nodes.size()));
    if (edges_seen != e)
        throw ParseError("edge count mismatch: header says " + std::to_string(e) + ", found " +
                         std::to_string(edges_seen));
    return NnfDag(std::move(nodes), static_cast<int>(v - 1), static_cast<Var>(n));
}

NnfDag parse_nnf_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_nnf(buf.str());
}

std::string write_nnf(const NnfDag& dag) {
    long edges = 0;
    for (auto& n : dag.nodes())
        edges += static_cast<long>(n.children.size());
    std::ostringstream out;
    out << "nnf " << dag.size() << ' ' << edges << ' ' << dag.var_count() << '\n';
    for (auto& n : dag.nodes()) {
        switch (n.kind) {
        case NnfKind::Literal:
            out << "L " << n.lit.to_dimacs() << '\n';
            break;
        case NnfKind::True:
            out << "A 0\n";
            break;
        case NnfKind::False:
            out << "O 0 0\n";
            break;
        case NnfKind::And:
            out << "A " << n.children.size();
            for (int c : n.children)
                out << ' ' << c;
            out << '\n';
            break;
        case NnfKind::Or:
            out << "O " << n.decision << ' ' << n.children.size();
            for (int c : n.children)
                out << ' ' << c;
            out << '\n';
            break;
        }
    }
    return out.str();
}

void write_nnf_file(const NnfDag& dag, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path);
    out << write_nnf(dag);
}

// -- Structural checks -----------------------------------------------------

DecomposabilityCheck check_decomposable(const NnfDag& dag) {
    auto reach = reachable_from_root(dag);
    for (size_t i = 0; i < dag.size(); ++i) {
        if (!reach[i] || dag.node(i).kind != NnfKind::And)
            continue;
        const auto& kids = dag.node(i).children;
        VarSet acc(dag.var_count());
        for (int c : kids) {
            Var shared = acc.first_common(dag.vars_of(c));
            if (shared != 0)
                return {false, static_cast<int>(i), shared};
            acc.unite(dag.vars_of(c));
        }
    }
    return {};
}

namespace {

// Polarity of a decision child with respect to variable v: the child is
// either the literal of v itself or an And with a literal child over v.
std::optional<bool> child_polarity(const NnfDag& dag, int child, Var v) {
    const NnfNode& n = dag.node(child);
    if (n.kind == NnfKind::Literal && n.lit.var() == v)
        return n.lit.positive();
    if (n.kind == NnfKind::And)
        for (int c : n.children) {
            const NnfNode& k = dag.node(c);
            if (k.kind == NnfKind::Literal && k.lit.var() == v)
                return k.lit.positive();
        }
    return std::nullopt;
}

bool decision_shaped(const NnfDag& dag, const NnfNode& n) {
    if (n.children.size() == 1)
        return true;
    if (n.children.size() != 2)
        return false;
    auto try_var = [&](Var v) {
        auto a = child_polarity(dag, n.children[0], v);
        auto b = child_polarity(dag, n.children[1], v);
        return a && b && *a != *b;
    };
    if (n.decision != 0)
        return try_var(n.decision);
    // no recorded decision variable: try to infer one from the first child
    const NnfNode& first = dag.node(n.children[0]);
    if (first.kind == NnfKind::Literal)
        return try_var(first.lit.var());
    if (first.kind == NnfKind::And) {
        for (int c : first.children) {
            const NnfNode& k = dag.node(c);
            if (k.kind == NnfKind::Literal && try_var(k.lit.var()))
                return true;
        }
    }
    return false;
}

DeterminismCheck check_deterministic_oracle(const NnfDag& dag) {
    auto reach = reachable_from_root(dag);
    std::vector<Var> vars = dag.mentioned().to_vector();
    int n = static_cast<int>(vars.size());
    if (n > 24)
        throw Error("oracle determinism check limited to 24 variables, got " +
                    std::to_string(n));
    std::vector<int> shift(dag.var_count() + 1, -1);
    for (int p = 0; p < n; ++p)
        shift[vars[p]] = n - 1 - p;

    uint64_t total = uint64_t(1) << n;
    std::vector<uint64_t> val(dag.size(), 0);
    for (uint64_t base = 0; base < total; base += 64) {
        uint64_t mask = detail::chunk_mask(total, base);
        for (size_t i = 0; i < dag.size(); ++i) {
            if (!reach[i])
                continue;
            const NnfNode& node = dag.node(i);
            switch (node.kind) {
            case NnfKind::Literal: {
                uint64_t w = detail::var_word(shift[node.lit.var()], base);
                val[i] = node.lit.positive() ? w : ~w;
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
                for (int c : node.children)
                    w &= val[c];
                val[i] = w;
                break;
            }
            case NnfKind::Or: {
                uint64_t w = 0;
                for (int c : node.children)
                    w |= val[c];
                val[i] = w;
                break;
            }
            }
        }
        for (size_t i = 0; i < dag.size(); ++i) {
            if (!reach[i] || dag.node(i).kind != NnfKind::Or)
                continue;
            const auto& kids = dag.node(i).children;
            for (size_t a = 0; a < kids.size(); ++a)
                for (size_t b = a + 1; b < kids.size(); ++b)
                    if (val[kids[a]] & val[kids[b]] & mask)
                        return {false, static_cast<int>(i)};
        }
    }
    return {};
}

} // namespace

DeterminismCheck check_deterministic(const NnfDag& dag, DetMode mode) {
    if (mode == DetMode::Oracle)
        return check_deterministic_oracle(dag);
    auto reach = reachable_from_root(dag);
    for (size_t i = 0; i < dag.size(); ++i) {
        if (!reach[i] || dag.node(i).kind != NnfKind::Or)
            continue;
        if (!decision_shaped(dag, dag.node(i)))
            return {false, static_cast<int>(i)};
    }
    return {};
}

// -- Transformations -------------------------------------------------------

NnfDag forget(const NnfDag& dag, const std::vector<Var>& vars, size_t* visit_count) {
    VarSet drop(dag.var_count());
    for (Var v : vars)
        if (v >= 1 && v <= dag.var_count())
            drop.add(v);
    std::vector<NnfNode> out;
    out.reserve(dag.size());
    size_t visits = 0;
    for (auto& n : dag.nodes()) {
        ++visits;
        if (n.kind == NnfKind::Literal && drop.contains(n.lit.var()))
            out.push_back(NnfNode::true_node());
        else
            out.push_back(n);
    }
    if (visit_count)
        *visit_count = visits;
    return NnfDag(std::move(out), dag.root(), dag.var_count());
}

NnfDag condition_nnf(const NnfDag& dag, const std::vector<Lit>& lits) {
    VarSet pos(dag.var_count()), neg(dag.var_count());
    for (Lit l : lits) {
        auto& mine = l.positive() ? pos : neg;
        auto& other = l.positive() ? neg : pos;
        if (l.var() > dag.var_count())
            continue; // variable not mentioned anywhere
        if (other.contains(l.var()))
            throw Error("contradictory literal set: variable " + std::to_string(l.var()));
        mine.add(l.var());
    }
    std::vector<NnfNode> out;
    out.reserve(dag.size());
    for (auto& n : dag.nodes()) {
        if (n.kind == NnfKind::Literal) {
            bool fixed_true = n.lit.positive() ? pos.contains(n.lit.var())
                                               : neg.contains(n.lit.var());
            bool fixed_false = n.lit.positive() ? neg.contains(n.lit.var())
                                                : pos.contains(n.lit.var());
            if (fixed_true) {
                out.push_back(NnfNode::true_node());
                continue;
            }
            if (fixed_false) {
                out.push_back(NnfNode::false_node());
                continue;
            }
        }
        out.push_back(n);
    }
    return NnfDag(std::move(out), dag.root(), dag.var_count());
}

NnfDag smooth(const NnfDag& dag) {
    std::vector<NnfNode> out;
    std::vector<VarSet> out_vars;
    std::vector<int> remap(dag.size(), -1);
    std::map<int, int> lit_nodes;   // Lit::index -> emitted node id
    std::map<Var, int> gadgets;     // var -> (v or not v) node id

    auto emit = [&](NnfNode n, VarSet vs) {
        out.push_back(std::move(n));
        out_vars.push_back(std::move(vs));
        return static_cast<int>(out.size() - 1);
    };
    auto lit_node = [&](Lit l) {
        auto it = lit_nodes.find(l.index());
        if (it != lit_nodes.end())
            return it->second;
        VarSet vs(dag.var_count());
        vs.add(l.var());
        int id = emit(NnfNode::literal(l), std::move(vs));
        lit_nodes[l.index()] = id;
        return id;
    };
    auto gadget = [&](Var v) {
        auto it = gadgets.find(v);
        if (it != gadgets.end())
            return it->second;
        int p = lit_node(Lit(v, true));
        int q = lit_node(Lit(v, false));
        VarSet vs(dag.var_count());
        vs.add(v);
        int id = emit(NnfNode::or_node({p, q}, v), std::move(vs));
        gadgets[v] = id;
        return id;
    };

    for (size_t i = 0; i < dag.size(); ++i) {
        const NnfNode& n = dag.node(i);
        if (n.kind == NnfKind::Or) {
            VarSet want(dag.var_count());
            for (int c : n.children)
                want.unite(dag.vars_of(c));
            std::vector<int> kids;
            kids.reserve(n.children.size());
            for (int c : n.children) {
                int mapped = remap[c];
                if (dag.vars_of(c) == want) {
                    kids.push_back(mapped);
                    continue;
                }
                std::vector<int> parts = {mapped};
                for (Var v : want.to_vector())
                    if (!dag.vars_of(c).contains(v))
                        parts.push_back(gadget(v));
                kids.push_back(emit(NnfNode::and_node(std::move(parts)), want));
            }
            remap[i] = emit(NnfNode::or_node(std::move(kids), n.decision), want);
        } else {
            NnfNode copy = n;
            for (int& c : copy.children)
                c = remap[c];
            if (copy.kind == NnfKind::Literal) {
                remap[i] = lit_node(copy.lit);
            } else {
                remap[i] = emit(std::move(copy), dag.vars_of(i));
            }
        }
    }
    return NnfDag(std::move(out), remap[dag.root()], dag.var_count());
}

// -- Queries ----------------------------------------------------------------

bool is_consistent(const NnfDag& dag) {
    std::vector<char> val(dag.size());
    for (size_t i = 0; i < dag.size(); ++i) {
        const NnfNode& n = dag.node(i);
        switch (n.kind) {
        case NnfKind::Literal:
        case NnfKind::True:
            val[i] = 1;
            break;
        case NnfKind::False:
            val[i] = 0;
            break;
        case NnfKind::And: {
            char v = 1;
            for (int c : n.children)
                v = v && val[c];
            val[i] = v;
            break;
        }
        case NnfKind::Or: {
            char v = 0;
            for (int c : n.children)
                v = v || val[c];
            val[i] = v;
            break;
        }
        }
    }
    return val[dag.root()];
}

bool entails_clause(const NnfDag& dag, const Clause& clause) {
    std::vector<Lit> negated;
    negated.reserve(clause.size());
    for (Lit l : clause)
        negated.push_back(-l);
    return !is_consistent(condition_nnf(dag, negated));
}

BigInt model_count(const NnfDag& dag, const std::vector<Var>& over) {
    auto decomp = check_decomposable(dag);
    if (!decomp.ok)
        throw Error("model_count requires a decomposable input (And node " +
                    std::to_string(decomp.node) + " repeats variable " +
                    std::to_string(decomp.var) + ")");
    auto reach = reachable_from_root(dag);
    for (size_t i = 0; i < dag.size(); ++i) {
        if (!reach[i] || dag.node(i).kind != NnfKind::Or)
            continue;
        const auto& kids = dag.node(i).children;
        for (size_t k = 1; k < kids.size(); ++k)
            if (dag.vars_of(kids[k]) != dag.vars_of(kids[0]))
                throw Error("model_count requires a smooth input (Or node " +
                            std::to_string(i) + ")");
    }
    VarSet over_set(dag.var_count() > 0 ? dag.var_count() : 1);
    int over_count = 0;
    for (Var v : over) {
        if (v < 1)
            throw Error("bad variable in count scope");
        if (v > over_set.max_var() || !over_set.contains(v)) {
            ++over_count;
            if (v > over_set.max_var()) {
                VarSet bigger(v);
                bigger.unite(over_set);
                over_set = bigger;
            }
            over_set.add(v);
        }
    }
    if (!dag.mentioned().is_subset_of(over_set))
        throw Error("count scope must include every mentioned variable");

    std::vector<BigInt> val(dag.size());
    for (size_t i = 0; i < dag.size(); ++i) {
        if (!reach[i])
            continue;
        const NnfNode& n = dag.node(i);
        switch (n.kind) {
        case NnfKind::Literal:
        case NnfKind::True:
            val[i] = 1;
            break;
        case NnfKind::False:
            val[i] = 0;
            break;
        case NnfKind::And: {
            BigInt v = 1;
            for (int c : n.children)
                v *= val[c];
            val[i] = v;
            break;
        }
        case NnfKind::Or: {
            BigInt v = 0;
            for (int c : n.children)
                v += val[c];
            val[i] = v;
            break;
        }
        }
    }
    int unmentioned = over_count - dag.mentioned().count();
    return val[dag.root()] << unmentioned;
}

std::optional<long long> min_cardinality(const NnfDag& dag) {
    constexpr long long kInf = LLONG_MAX / 4;
    std::vector<long long> val(dag.size());
    for (size_t i = 0; i < dag.size(); ++i) {
        const NnfNode& n = dag.node(i);
        switch (n.kind) {
        case NnfKind::Literal:
            val[i] = n.lit.positive() ? 1 : 0;
            break;
        case NnfKind::True:
            val[i] = 0;
            break;
        case NnfKind::False:
            val[i] = kInf;
            break;
        case NnfKind::And: {
            long long v = 0;
            for (int c : n.children)
                v = std::min(v + val[c], kInf);
            val[i] = v;
            break;
        }
        case NnfKind::Or: {
            long long v = kInf;
            for (int c : n.children)
                v = std::min(v, val[c]);
            val[i] = v;
            break;
        }
        }
    }
    if (val[dag.root()] >= kInf)
        return std::nullopt;
    return val[dag.root()];
}

NnfStats stats(const NnfDag& dag) {
    auto reach = reachable_from_root(dag);
    NnfStats s;
    for (size_t i = 0; i < dag.size(); ++i) {
        if (!reach[i])
            continue;
        ++s.node_count;
        s.edge_count += static_cast<long long>(dag.node(i).children.size());
    }
    return s;
}

} // namespace forge
