// Boolean expression trees: the pre-CNF input language.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "forge/basics.hpp"

namespace forge {

/// Immutable Boolean expression tree over literals, NOT/AND/OR/XOR/IFF
/// and constants. AND/OR take one or more operands; XOR/IFF exactly two.
class Formula {
  public:
    enum class Kind { Var, Not, And, Or, Xor, Iff, Const };

    static Formula var(Var v);
    static Formula constant(bool value);
    static Formula negate(Formula f);
    static Formula conj(std::vector<Formula> fs);
    static Formula disj(std::vector<Formula> fs);
    static Formula exclusive_or(Formula a, Formula b);
    static Formula iff(Formula a, Formula b);

    Kind kind() const { return kind_; }
    Var variable() const;
    bool const_value() const;
    const std::vector<Formula>& operands() const { return kids_; }

    /// Largest variable index mentioned; the formula's declared universe.
    Var max_var() const;

    /// Number of AND/OR/XOR/IFF nodes.
    int gate_count() const;

    bool operator==(const Formula& o) const;

  private:
    Formula(Kind k) : kind_(k) {}

    Kind kind_;
    Var var_ = 0;
    bool value_ = false;
    std::vector<Formula> kids_;
};

/// Parses the prefix text format:
///   (and f ...)  (or f ...)  (not f)  (xor a b)  (iff a b)  (var i)  true  false
/// Whitespace-insensitive.
Formula parse_formula(const std::string& text);
Formula parse_formula_file(const std::string& path);

/// Canonical single-space rendering of the same format.
std::string write_formula(const Formula& f);

} // namespace forge
