// The three equivalence-modulo-forgetting transformations: Tseitin
// transformation, the extension rule and bounded variable addition. Every
// variable they introduce is registered in the output's aux registry, so
// the pipeline knows what to forget after compilation.
#pragma once

#include <optional>
#include <vector>

#include "forge/cnf.hpp"
#include "forge/formula.hpp"

namespace forge {

/// Clausifies a formula with one fresh definitional variable per gate
/// (AND/OR/XOR/IFF; negations fold into literals) plus a unit clause
/// asserting the root. Constant subformulas are folded away first. Fresh
/// variables start right after the formula's declared universe and are
/// registered with tag tseitin.
Cnf tseitin(const Formula& formula);

/// The extension rule: appends a fresh variable X defined as l1 or l2 via
/// the clauses (-X l1 l2), (X -l1), (X -l2). X is registered with tag
/// extension. Definitional clauses that would be tautologous (l1 = -l2)
/// are vacuous and dropped.
Cnf extend(const Cnf& cnf, Lit l1, Lit l2);

/// Generalized extension: conjoins (Y iff alpha) for a fresh Y, clausified
/// Tseitin-style with Y serving as the definitional variable of alpha's
/// top gate. Y and any internal gate variables are registered with tag
/// extension.
Cnf extend_general(const Cnf& cnf, const Formula& alpha);

/// One committed BVA replacement. matched_literals starts with the seed;
/// every (C \ seed) + l for C in matched_clauses, l in matched_literals is
/// a clause of the input (the resolvent grid). reduction is the clause
/// count saved: |lits| * |clauses| - (|lits| + |clauses|).
struct BvaMatch {
    std::vector<Lit> matched_literals;
    std::vector<Clause> matched_clauses;
    int reduction = 0;
};

struct BvaStepResult {
    Cnf cnf;
    BvaMatch match;
};

/// Greedy search for a profitable BVA pattern. Seeds are tried by
/// occurrence count (descending, ties by literal index); a match grows
/// while the reduction improves. A match is applied when its reduction is
/// positive, or zero for a full 2x2 grid (the degenerate case still
/// shrinks structure around a single fresh variable and is what rewrites
/// delta_a(2) all the way down). Returns std::nullopt when no such match
/// exists (NO_GAIN).
std::optional<BvaStepResult> bva_step(const Cnf& cnf);

/// Iterates bva_step until NO_GAIN or max_steps applications.
Cnf bva(const Cnf& cnf, int max_steps);

/// Like bva, also reporting how many steps were applied.
Cnf bva_counted(const Cnf& cnf, int max_steps, int* steps_applied);

} // namespace forge
