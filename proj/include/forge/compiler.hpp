// Self-contained top-down d-DNNF compiler: exhaustive DPLL search with
// unit propagation, connected components and component caching. Output is
// always decomposable and structurally deterministic (decision Or nodes).
#pragma once

#include <chrono>
#include <cstddef>
#include <optional>

#include "forge/cnf.hpp"
#include "forge/nnf.hpp"

namespace forge {

struct CompileOptions {
    bool use_cache = true;
    std::optional<std::chrono::steady_clock::time_point> deadline;
    size_t max_nodes = SIZE_MAX; // arena budget, raw nodes before compaction
};

struct CompileStats {
    size_t cache_hits = 0;
    size_t cache_misses = 0;
};

/// Compiles a CNF to d-DNNF. An inconsistent input yields the single
/// false node, an empty input the single true node. Throws LimitError
/// when the deadline or node budget of the options is exceeded.
NnfDag compile(const Cnf& cnf, const CompileOptions& options = {},
               CompileStats* stats_out = nullptr);

/// Branch variable: maximal clause occurrence count, ties by smallest
/// index. Requires at least one variable occurring in the clauses.
Var branch_heuristic(const Cnf& cnf);

} // namespace forge
