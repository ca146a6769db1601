// NNF DAGs in a topologically ordered arena, c2d-style file I/O,
// decomposability/determinism checks, forgetting, conditioning and the
// tractable DNNF queries.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <vector>

#include "forge/cnf.hpp"

namespace forge {

using BigInt = boost::multiprecision::cpp_int;

enum class NnfKind : uint8_t { Literal, True, False, And, Or };

struct NnfNode {
    NnfKind kind;
    Lit lit;                   // Literal nodes
    std::vector<int> children; // And/Or nodes, ids strictly below own id
    Var decision = 0;          // Or nodes: decision variable, 0 if unknown

    static NnfNode literal(Lit l) { return {NnfKind::Literal, l, {}, 0}; }
    static NnfNode true_node() { return {NnfKind::True, Lit(), {}, 0}; }
    static NnfNode false_node() { return {NnfKind::False, Lit(), {}, 0}; }
    static NnfNode and_node(std::vector<int> kids) {
        return {NnfKind::And, Lit(), std::move(kids), 0};
    }
    static NnfNode or_node(std::vector<int> kids, Var decision) {
        return {NnfKind::Or, Lit(), std::move(kids), decision};
    }

    bool operator==(const NnfNode& o) const {
        return kind == o.kind && lit == o.lit && children == o.children &&
               decision == o.decision;
    }
};

/// Rooted DAG of NNF nodes. The arena is topologically ordered (children
/// precede parents); the per-node sets of mentioned variables are computed
/// at construction. Immutable afterwards; transformations build new DAGs.
class NnfDag {
  public:
    NnfDag() = default;
    NnfDag(std::vector<NnfNode> nodes, int root, Var var_count);

    const std::vector<NnfNode>& nodes() const { return nodes_; }
    const NnfNode& node(int id) const { return nodes_[id]; }
    size_t size() const { return nodes_.size(); }
    int root() const { return root_; }
    Var var_count() const { return var_count_; }

    const VarSet& vars_of(int id) const { return var_sets_[id]; }
    const VarSet& mentioned() const { return var_sets_[root_]; }

  private:
    std::vector<NnfNode> nodes_;
    std::vector<VarSet> var_sets_;
    int root_ = -1;
    Var var_count_ = 0;
};

struct NnfStats {
    long long node_count = 0;
    long long edge_count = 0;
    bool operator==(const NnfStats& o) const {
        return node_count == o.node_count && edge_count == o.edge_count;
    }
};

// -- File format ---------------------------------------------------------
//
// c2d NNF: header `nnf <v> <e> <n>`, then one node per line in arena
// order: `L <lit>`, `A <count> <ids...>`, `O <decision|0> <count> <ids...>`.
// True is the empty conjunction `A 0`; false the empty disjunction `O 0 0`.
// The root is the last node.

NnfDag parse_nnf(const std::string& text);
NnfDag parse_nnf_file(const std::string& path);
std::string write_nnf(const NnfDag& dag);
void write_nnf_file(const NnfDag& dag, const std::string& path);

// -- Structural checks -----------------------------------------------------

struct DecomposabilityCheck {
    bool ok = true;
    int node = -1;  // offending And node
    Var var = 0;    // variable shared between two children
};

/// True iff every And node's children mention pairwise disjoint variables.
DecomposabilityCheck check_decomposable(const NnfDag& dag);

enum class DetMode { Structural, Oracle };

struct DeterminismCheck {
    bool ok = true;
    int node = -1; // offending Or node
};

/// Structural mode accepts only decision-shaped Or nodes (sound but
/// incomplete). Oracle mode decides pairwise inconsistency of every Or
/// node's children exactly, by enumerating assignments; it requires at
/// most 24 mentioned variables.
DeterminismCheck check_deterministic(const NnfDag& dag, DetMode mode);

// -- Transformations -------------------------------------------------------

/// Replaces every literal over a forgotten variable with true. One pass
/// over the arena; node and edge counts are preserved. On a decomposable
/// input the result is decomposable and computes the existential
/// quantification of the input. If visit_count is given it receives the
/// number of nodes visited (always the arena size).
NnfDag forget(const NnfDag& dag, const std::vector<Var>& vars,
              size_t* visit_count = nullptr);

/// Literal leaves agreeing with an assignment become true, contradicting
/// leaves false. Errors on a contradictory literal set.
NnfDag condition_nnf(const NnfDag& dag, const std::vector<Lit>& lits);

/// Makes every Or node's children mention the same variable set by
/// conjoining (v or not v) gadgets. Preserves the function and
/// decomposability. Requires a decomposable input.
NnfDag smooth(const NnfDag& dag);

// -- Queries ----------------------------------------------------------------

/// Satisfiability of a decomposable DAG, by one bottom-up boolean pass.
bool is_consistent(const NnfDag& dag);

/// dag |= clause, decided by conditioning on the negated clause.
/// Requires a decomposable input.
bool entails_clause(const NnfDag& dag, const Clause& clause);

/// Model count over `over`. Requires decomposability, smoothness and
/// mentioned(root) being a subset of `over`; these three are verified and
/// violations raise errors. Determinism is required for the answer to be
/// the model count but is the caller's obligation (it is expensive to
/// verify; see check_deterministic).
BigInt model_count(const NnfDag& dag, const std::vector<Var>& over);

/// Minimum number of positive literals over all models; unmentioned
/// variables count as false. std::nullopt when inconsistent.
/// Requires a decomposable input.
std::optional<long long> min_cardinality(const NnfDag& dag);

/// Node and edge counts of the part reachable from the root.
NnfStats stats(const NnfDag& dag);

} // namespace forge
