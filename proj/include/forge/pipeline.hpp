// Transform -> compile -> forget orchestration with statistics.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "forge/compiler.hpp"
#include "forge/formula.hpp"
#include "forge/transform.hpp"

namespace forge {

enum class TransformKind { None, Bva, Tseitin, Extension };

const char* transform_kind_name(TransformKind k);

struct PipelineReport {
    TransformKind kind = TransformKind::None;
    int bva_steps_requested = 0;
    int bva_steps_applied = 0;
    std::vector<Var> aux_vars;   // forgotten after compilation
    int original_var_count = 0;
    long long input_clauses = 0, transformed_clauses = 0;
    NnfStats pre_stats;          // compiled d-DNNF, before forgetting
    NnfStats post_stats;         // after forgetting
    double transform_seconds = 0, compile_seconds = 0, forget_seconds = 0;
    double total_seconds = 0;
    bool equivalence_checked = false; // oracle check runs up to 24 original vars

    /// Line-oriented key=value block.
    std::string to_kv_block() const;
    /// Machine-readable row: "#node #edge time" of the final DNNF.
    std::string to_table_row() const;
};

/// Algorithm-1 run on a CNF: applies the transform (None applies nothing;
/// Bva runs up to max_steps greedy steps; Extension expects the input to
/// carry its extension variables in the aux registry already), compiles
/// the result to d-DNNF and forgets every registered auxiliary variable.
/// With at most 24 original variables the output is verified equivalent
/// to the input over the original variables (a mismatch is an internal
/// error); beyond that the report carries equivalence_checked = false.
std::pair<NnfDag, PipelineReport> run(const Cnf& input, TransformKind kind, int max_steps,
                                      const CompileOptions& copts = {});

/// Formula entry point; the transform is always Tseitin.
std::pair<NnfDag, PipelineReport> run(const Formula& input, const CompileOptions& copts = {});

/// Runs the Bva branch and the None branch on the same input.
std::pair<PipelineReport, PipelineReport> compare(const Cnf& input, int max_steps,
                                                  const CompileOptions& copts = {});

} // namespace forge
