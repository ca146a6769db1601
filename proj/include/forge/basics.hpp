// Shared basics: error types, literals, variable sets.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace forge {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input text (DIMACS, NNF, formula, jointree).
struct ParseError : Error {
    using Error::Error;
};

/// A resource budget (time, nodes, oracle size) was exceeded.
struct LimitError : Error {
    using Error::Error;
};

/// Variables are 1-based indices, DIMACS style.
using Var = int;

/// A literal: variable plus polarity, stored as a signed DIMACS code.
class Lit {
  public:
    Lit() : code_(0) {}
    Lit(Var v, bool positive) : code_(positive ? v : -v) {}

    static Lit from_dimacs(int code) {
        if (code == 0)
            throw Error("literal code must be nonzero");
        Lit l;
        l.code_ = code;
        return l;
    }

    Var var() const { return code_ < 0 ? -code_ : code_; }
    bool positive() const { return code_ > 0; }
    int to_dimacs() const { return code_; }

    Lit operator-() const { return from_dimacs(-code_); }

    /// Dense 0-based key: positive literal of var v -> 2v-2, negative -> 2v-1.
    /// Orders literals by variable, positive before negative.
    int index() const { return positive() ? 2 * var() - 2 : 2 * var() - 1; }

    bool operator==(const Lit& o) const { return code_ == o.code_; }
    bool operator!=(const Lit& o) const { return code_ != o.code_; }
    bool operator<(const Lit& o) const { return index() < o.index(); }

  private:
    int code_;
};

/// Fixed-capacity set of variables backed by a bit vector.
class VarSet {
  public:
    VarSet() = default;
    explicit VarSet(Var max_var) : max_var_(max_var), words_((max_var + 64) / 64, 0) {}

    Var max_var() const { return max_var_; }

    void add(Var v) {
        check(v);
        words_[word(v)] |= bit(v);
    }
    void remove(Var v) {
        check(v);
        words_[word(v)] &= ~bit(v);
    }
    bool contains(Var v) const {
        if (v < 1 || v > max_var_)
            return false;
        return words_[word(v)] & bit(v);
    }

    void unite(const VarSet& o) {
        grow_to(o.max_var_);
        for (size_t i = 0; i < o.words_.size(); ++i)
            words_[i] |= o.words_[i];
    }

    bool intersects(const VarSet& o) const {
        size_t n = std::min(words_.size(), o.words_.size());
        for (size_t i = 0; i < n; ++i)
            if (words_[i] & o.words_[i])
                return true;
        return false;
    }

    /// Smallest variable present in both sets, or 0 if disjoint.
    Var first_common(const VarSet& o) const {
        size_t n = std::min(words_.size(), o.words_.size());
        for (size_t i = 0; i < n; ++i) {
            uint64_t w = words_[i] & o.words_[i];
            if (w)
                return static_cast<Var>(i * 64 + __builtin_ctzll(w));
        }
        return 0;
    }

    bool is_subset_of(const VarSet& o) const {
        for (size_t i = 0; i < words_.size(); ++i) {
            uint64_t w = words_[i];
            if (i >= o.words_.size() ? w != 0 : (w & ~o.words_[i]))
                return false;
        }
        return true;
    }

    int count() const {
        int c = 0;
        for (uint64_t w : words_)
            c += __builtin_popcountll(w);
        return c;
    }
    bool empty() const {
        for (uint64_t w : words_)
            if (w)
                return false;
        return true;
    }

    std::vector<Var> to_vector() const {
        std::vector<Var> out;
        for (size_t i = 0; i < words_.size(); ++i) {
            uint64_t w = words_[i];
            while (w) {
                out.push_back(static_cast<Var>(i * 64 + __builtin_ctzll(w)));
                w &= w - 1;
            }
        }
        return out;
    }

    bool operator==(const VarSet& o) const {
        size_t n = std::max(words_.size(), o.words_.size());
        for (size_t i = 0; i < n; ++i) {
            uint64_t a = i < words_.size() ? words_[i] : 0;
            uint64_t b = i < o.words_.size() ? o.words_[i] : 0;
            if (a != b)
                return false;
        }
        return true;
    }
    bool operator!=(const VarSet& o) const { return !(*this == o); }

  private:
    void check(Var v) const {
        if (v < 1 || v > max_var_)
            throw Error("variable " + std::to_string(v) + " outside universe 1.." +
                        std::to_string(max_var_));
    }
    void grow_to(Var m) {
        if (m > max_var_) {
            max_var_ = m;
            words_.resize((m + 64) / 64, 0);
        }
    }
    static size_t word(Var v) { return static_cast<size_t>(v) / 64; }
    static uint64_t bit(Var v) { return uint64_t(1) << (v % 64); }

    Var max_var_ = 0;
    std::vector<uint64_t> words_;
};

} // namespace forge
