// Brute-force ground truth: explicit truth tables for CNFs, NNF DAGs and
// formulas, with forgetting, equivalence and the emf check.
#pragma once

#include <functional>
#include <vector>

#include "forge/cnf.hpp"
#include "forge/formula.hpp"
#include "forge/nnf.hpp"

namespace forge {

/// Explicit truth table over an ordered variable list. Hard cap of 24
/// variables. The first listed variable is the most significant position
/// of the assignment index.
class TruthOracle {
  public:
    static constexpr int kMaxVars = 24;

    TruthOracle() = default;
    TruthOracle(std::vector<Var> vars, std::vector<uint64_t> table);

    /// Materializes a table by calling eval on every assignment, given as
    /// bits aligned with the variable list.
    static TruthOracle from_function(std::vector<Var> vars,
                                     const std::function<bool(const std::vector<bool>&)>& eval);

    const std::vector<Var>& variables() const { return vars_; }
    int num_vars() const { return static_cast<int>(vars_.size()); }
    uint64_t num_assignments() const { return uint64_t(1) << vars_.size(); }

    bool value(uint64_t assignment_index) const;
    bool eval(const std::vector<bool>& assignment) const;

    const std::vector<uint64_t>& table() const { return table_; }

    /// Same function, variables listed in a different order.
    TruthOracle reordered(const std::vector<Var>& new_vars) const;

    bool operator==(const TruthOracle& o) const { return vars_ == o.vars_ && table_ == o.table_; }

  private:
    std::vector<Var> vars_;
    std::vector<uint64_t> table_; // 2^n bits, packed; trailing bits zero
};

// -- Builders ----------------------------------------------------------------
//
// The default variable list of a CNF is 1..universe; of a DAG or formula,
// the mentioned variables in increasing order. The explicit-list overloads
// must cover every mentioned variable.

TruthOracle oracle_of(const Cnf& cnf);
TruthOracle oracle_of(const Cnf& cnf, std::vector<Var> vars);
TruthOracle oracle_of(const NnfDag& dag);
TruthOracle oracle_of(const NnfDag& dag, std::vector<Var> vars);
TruthOracle oracle_of(const Formula& f);
TruthOracle oracle_of(const Formula& f, std::vector<Var> vars);

// -- Operations ---------------------------------------------------------------

/// Existential quantification: disjunction over all assignments of `vars`,
/// which must all be listed by the oracle.
TruthOracle oracle_forget(const TruthOracle& o, const std::vector<Var>& vars);

/// Conditioning on a set of literals; the conditioned variables leave the
/// variable list.
TruthOracle oracle_condition(const TruthOracle& o, const std::vector<Lit>& lits);

/// f(X) == exists Y. g(X, Y), where Y is g's variables minus f's.
/// f's variables must be a subset of g's.
bool emf_check(const TruthOracle& f, const TruthOracle& g);

/// Number of models.
uint64_t oracle_count(const TruthOracle& o);

/// Pointwise equality; requires identical variable lists.
bool oracle_equiv(const TruthOracle& a, const TruthOracle& b);

} // namespace forge
