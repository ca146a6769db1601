#include "forge/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>

#include "forge/oracle.hpp"

namespace forge {

const char* transform_kind_name(TransformKind k) {
    switch (k) {
    case TransformKind::None: return "none";
    case TransformKind::Bva: return "bva";
    case TransformKind::Tseitin: return "tseitin";
    case TransformKind::Extension: return "extension";
    }
    return "?";
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    auto d = std::chrono::steady_clock::now() - t0;
    double s = std::chrono::duration<double>(d).count();
    return std::round(s * 100.0) / 100.0; // 10 ms resolution
}

struct Reference {
    std::vector<Var> original_vars;
    std::optional<TruthOracle> oracle; // engaged when small enough to verify
};

std::pair<NnfDag, PipelineReport> compile_and_forget(Cnf transformed, Reference ref,
                                                     PipelineReport report,
                                                     const CompileOptions& copts,
                                                     double transform_seconds) {
    auto t0 = std::chrono::steady_clock::now();
    report.transform_seconds = transform_seconds;
    report.transformed_clauses = static_cast<long long>(transformed.clause_count());
    report.aux_vars = transformed.aux_vars();
    report.original_var_count = static_cast<int>(ref.original_vars.size());

    auto tc = std::chrono::steady_clock::now();
    NnfDag compiled = compile(transformed, copts);
    report.compile_seconds = seconds_since(tc);
    report.pre_stats = stats(compiled);

    auto tf = std::chrono::steady_clock::now();
    size_t visits = 0;
    NnfDag result = forget(compiled, report.aux_vars, &visits);
    report.forget_seconds = seconds_since(tf);
    report.post_stats = stats(result);
    if (visits != compiled.size())
        throw Error("forget visited " + std::to_string(visits) + " of " +
                    std::to_string(compiled.size()) + " nodes");

    if (ref.oracle) {
        TruthOracle got = oracle_of(result, ref.original_vars);
        if (ref.oracle->table() != got.table())
            throw Error("pipeline output is not equivalent to its input");
        report.equivalence_checked = true;
    }

    report.total_seconds = seconds_since(t0) + transform_seconds;
    return {std::move(result), std::move(report)};
}

Reference reference_of(const Cnf& input) {
    Reference ref;
    for (Var v = 1; v <= input.universe(); ++v)
        if (!input.is_aux(v))
            ref.original_vars.push_back(v);
    if (input.universe() <= TruthOracle::kMaxVars) {
        TruthOracle o = oracle_of(input);
        if (!input.aux_vars().empty())
            o = oracle_forget(o, input.aux_vars());
        ref.oracle = std::move(o);
    }
    return ref;
}

} // namespace

std::pair<NnfDag, PipelineReport> run(const Cnf& input, TransformKind kind, int max_steps,
                                      const CompileOptions& copts) {
    PipelineReport report;
    report.kind = kind;
    report.input_clauses = static_cast<long long>(input.clause_count());
    auto t0 = std::chrono::steady_clock::now();
    Cnf transformed = input;
    switch (kind) {
    case TransformKind::None:
    case TransformKind::Extension:
        break;
    case TransformKind::Bva:
        report.bva_steps_requested = max_steps;
        transformed = bva_counted(input, max_steps, &report.bva_steps_applied);
        break;
    case TransformKind::Tseitin:
        throw Error("tseitin requires a formula input");
    }
    return compile_and_forget(std::move(transformed), reference_of(input), std::move(report),
                              copts, seconds_since(t0));
}

std::pair<NnfDag, PipelineReport> run(const Formula& input, const CompileOptions& copts) {
    PipelineReport report;
    report.kind = TransformKind::Tseitin;
    report.input_clauses = 0;
    auto t0 = std::chrono::steady_clock::now();
    Cnf transformed = tseitin(input);

    Reference ref;
    for (Var v = 1; v <= input.max_var(); ++v)
        ref.original_vars.push_back(v);
    if (input.max_var() <= TruthOracle::kMaxVars)
        ref.oracle = oracle_of(input, ref.original_vars);
    return compile_and_forget(std::move(transformed), std::move(ref), std::move(report),
                              copts, seconds_since(t0));
}

std::pair<PipelineReport, PipelineReport> compare(const Cnf& input, int max_steps,
                                                  const CompileOptions& copts) {
    auto with = run(input, TransformKind::Bva, max_steps, copts);
    auto without = run(input, TransformKind::None, 0, copts);
    return {std::move(with.second), std::move(without.second)};
}

namespace {

std::string format_seconds(double s) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(2);
    out << s;
    return out.str();
}

} // namespace

std::string PipelineReport::to_kv_block() const {
    std::ostringstream out;
    out << "transform=" << transform_kind_name(kind);
    if (kind == TransformKind::Bva)
        out << "(" << bva_steps_applied << ")";
    out << '\n';
    out << "aux_vars=";
    for (size_t i = 0; i < aux_vars.size(); ++i)
        out << (i ? " " : "") << aux_vars[i];
    out << '\n';
    out << "original_vars=" << original_var_count << '\n';
    out << "input_clauses=" << input_clauses << '\n';
    out << "transformed_clauses=" << transformed_clauses << '\n';
    out << "pre_nodes=" << pre_stats.node_count << '\n';
    out << "pre_edges=" << pre_stats.edge_count << '\n';
    out << "post_nodes=" << post_stats.node_count << '\n';
    out << "post_edges=" << post_stats.edge_count << '\n';
    out << "transform_time=" << format_seconds(transform_seconds) << '\n';
    out << "compile_time=" << format_seconds(compile_seconds) << '\n';
    out << "forget_time=" << format_seconds(forget_seconds) << '\n';
    out << "total_time=" << format_seconds(total_seconds) << '\n';
    out << "equivalence=" << (equivalence_checked ? "verified" : "unverified") << '\n';
    return out.str();
}

std::string PipelineReport::to_table_row() const {
    std::ostringstream out;
    out << post_stats.node_count << ' ' << post_stats.edge_count << ' '
        << format_seconds(total_seconds);
    return out.str();
}

} // namespace forge
