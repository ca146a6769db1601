#include "forge/compiler.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace forge {

namespace {

// Working clause form: sorted dimacs codes; clause sets are sorted and
// duplicate-free so they double as canonical cache keys.
using WClause = std::vector<int>;
using WSet = std::vector<WClause>;

WSet canonicalize(const Cnf& cnf) {
    WSet set;
    set.reserve(cnf.clause_count());
    for (auto& c : cnf.clauses()) {
        WClause w;
        w.reserve(c.size());
        for (Lit l : c)
            w.push_back(l.to_dimacs());
        std::sort(w.begin(), w.end());
        set.push_back(std::move(w));
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    return set;
}

std::string serialize(const WSet& set) {
    std::string key;
    key.reserve(set.size() * 8);
    for (auto& c : set) {
        for (int code : c) {
            key.append(reinterpret_cast<const char*>(&code), sizeof(code));
        }
        int zero = 0;
        key.append(reinterpret_cast<const char*>(&zero), sizeof(zero));
    }
    return key;
}

// conditioning on a single literal, preserving canonical order
WSet assign(const WSet& set, int lit) {
    WSet out;
    out.reserve(set.size());
    for (auto& c : set) {
        if (std::binary_search(c.begin(), c.end(), lit))
            continue;
        if (std::binary_search(c.begin(), c.end(), -lit)) {
            WClause w;
            w.reserve(c.size() - 1);
            for (int code : c)
                if (code != -lit)
                    w.push_back(code);
            out.push_back(std::move(w));
        } else {
            out.push_back(c);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct Builder {
    std::vector<NnfNode> nodes;
    std::unordered_map<int64_t, int> literal_ids;
    std::map<std::pair<std::vector<int>, Var>, int> or_ids;
    std::map<std::vector<int>, int> and_ids;
    int true_id = -1, false_id = -1;
    size_t max_nodes;

    explicit Builder(size_t budget) : max_nodes(budget) {}

    int push(NnfNode n) {
        if (nodes.size() >= max_nodes)
            throw LimitError("compile node budget exceeded");
        nodes.push_back(std::move(n));
        return static_cast<int>(nodes.size() - 1);
    }
    int true_node() {
        if (true_id < 0)
            true_id = push(NnfNode::true_node());
        return true_id;
    }
    int false_node() {
        if (false_id < 0)
            false_id = push(NnfNode::false_node());
        return false_id;
    }
    int literal(int code) {
        auto [it, fresh] = literal_ids.try_emplace(code, -1);
        if (fresh)
            it->second = push(NnfNode::literal(Lit::from_dimacs(code)));
        return it->second;
    }
    bool is_false(int id) const { return nodes[id].kind == NnfKind::False; }
    bool is_true(int id) const { return nodes[id].kind == NnfKind::True; }

    // conjunction with constant elimination and hash-consing
    int conj(std::vector<int> kids) {
        std::vector<int> keep;
        keep.reserve(kids.size());
        for (int k : kids) {
            if (is_false(k))
                return false_node();
            if (!is_true(k))
                keep.push_back(k);
        }
        if (keep.empty())
            return true_node();
        if (keep.size() == 1)
            return keep[0];
        auto [it, fresh] = and_ids.try_emplace(keep, -1);
        if (fresh)
            it->second = push(NnfNode::and_node(keep));
        return it->second;
    }
    int decision(std::vector<int> kids, Var v) {
        auto [it, fresh] = or_ids.try_emplace({kids, v}, -1);
        if (fresh)
            it->second = push(NnfNode::or_node(kids, v));
        return it->second;
    }
};

struct Compiler {
    Builder builder;
    std::unordered_map<std::string, int> cache;
    CompileOptions options;
    CompileStats stats;
    size_t ticks = 0;

    explicit Compiler(const CompileOptions& opt) : builder(opt.max_nodes), options(opt) {}

    void tick() {
        if (++ticks % 1024 == 0 && options.deadline &&
            std::chrono::steady_clock::now() > *options.deadline)
            throw LimitError("compile deadline exceeded");
    }

    // unit propagation to fixpoint; false on conflict
    bool propagate(WSet& set, std::vector<int>& implied) {
        while (true) {
            int unit = 0;
            for (auto& c : set) {
                if (c.empty())
                    return false;
                if (c.size() == 1) {
                    unit = c[0];
                    break;
                }
            }
            if (unit == 0)
                return true;
            implied.push_back(unit);
            set = assign(set, unit);
        }
    }

    std::vector<WSet> split_components(const WSet& set) {
        // union-find over clause indices through shared variables
        size_t n = set.size();
        std::vector<int> parent(n);
        for (size_t i = 0; i < n; ++i)
            parent[i] = static_cast<int>(i);
        auto find = [&](int x) {
            while (parent[x] != x)
                x = parent[x] = parent[parent[x]];
            return x;
        };
        std::unordered_map<int, int> var_home;
        for (size_t i = 0; i < n; ++i)
            for (int code : set[i]) {
                int v = code < 0 ? -code : code;
                auto [it, fresh] = var_home.try_emplace(v, static_cast<int>(i));
                if (!fresh)
                    parent[find(static_cast<int>(i))] = find(it->second);
            }
        std::map<int, WSet> groups;
        for (size_t i = 0; i < n; ++i)
            groups[find(static_cast<int>(i))].push_back(set[i]);
        std::vector<WSet> out;
        out.reserve(groups.size());
        for (auto& [root, g] : groups)
            out.push_back(std::move(g));
        return out;
    }

    int pick_branch_var(const WSet& set) {
        std::map<int, int> occ;
        for (auto& c : set)
            for (int code : c)
                ++occ[code < 0 ? -code : code];
        int best = 0, best_count = -1;
        for (auto& [v, count] : occ)
            if (count > best_count) {
                best = v;
                best_count = count;
            }
        return best;
    }

    int compile_set(const WSet& set) {
        tick();
        if (set.empty())
            return builder.true_node();
        WSet work = set;
        std::vector<int> implied;
        if (!propagate(work, implied))
            return builder.false_node();

        std::vector<int> parts;
        parts.reserve(implied.size() + 2);
        for (int code : implied)
            parts.push_back(builder.literal(code));

        if (!work.empty()) {
            for (auto& comp : split_components(work)) {
                int id = compile_component(comp);
                if (builder.is_false(id))
                    return builder.false_node();
                parts.push_back(id);
            }
        }
        return builder.conj(std::move(parts));
    }

    int compile_component(const WSet& comp) {
        std::string key;
        if (options.use_cache) {
            key = serialize(comp);
            auto it = cache.find(key);
            if (it != cache.end()) {
                ++stats.cache_hits;
                return it->second;
            }
            ++stats.cache_misses;
        }
        int v = pick_branch_var(comp);
        int pos = compile_set(assign(comp, v));
        int neg = compile_set(assign(comp, -v));
        int pos_branch = builder.is_false(pos) ? pos : builder.conj({builder.literal(v), pos});
        int neg_branch = builder.is_false(neg) ? neg : builder.conj({builder.literal(-v), neg});
        int id;
        if (builder.is_false(pos_branch))
            id = neg_branch;
        else if (builder.is_false(neg_branch))
            id = pos_branch;
        else
            id = builder.decision({pos_branch, neg_branch}, v);
        if (options.use_cache)
            cache.emplace(std::move(key), id);
        return id;
    }
};

// drop unreachable nodes, keeping relative order
NnfDag compact(std::vector<NnfNode> nodes, int root, Var var_count) {
    std::vector<char> keep(nodes.size(), 0);
    std::vector<int> stack = {root};
    keep[root] = 1;
    while (!stack.empty()) {
        int id = stack.back();
        stack.pop_back();
        for (int c : nodes[id].children)
            if (!keep[c]) {
                keep[c] = 1;
                stack.push_back(c);
            }
    }
    std::vector<int> remap(nodes.size(), -1);
    std::vector<NnfNode> out;
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (!keep[i])
            continue;
        NnfNode n = std::move(nodes[i]);
        for (int& c : n.children)
            c = remap[c];
        remap[i] = static_cast<int>(out.size());
        out.push_back(std::move(n));
    }
    return NnfDag(std::move(out), remap[root], var_count);
}

} // namespace

NnfDag compile(const Cnf& cnf, const CompileOptions& options, CompileStats* stats_out) {
    Compiler compiler(options);
    int root = compiler.compile_set(canonicalize(cnf));
    if (stats_out)
        *stats_out = compiler.stats;
    return compact(std::move(compiler.builder.nodes), root, cnf.universe());
}

Var branch_heuristic(const Cnf& cnf) {
    std::map<Var, int> occ;
    for (auto& c : cnf.clauses())
        for (Lit l : c)
            ++occ[l.var()];
    if (occ.empty())
        throw Error("branch_heuristic requires at least one occurring variable");
    Var best = 0;
    int best_count = -1;
    for (auto& [v, count] : occ)
        if (count > best_count) {
            best = v;
            best_count = count;
        }
    return best;
}

} // namespace forge
