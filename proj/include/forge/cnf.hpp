// CNF data model, DIMACS I/O, conditioning, unit propagation,
// connected components and primal-graph extraction.
#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "forge/basics.hpp"

namespace forge {

/// A duplicate-free disjunction of literals. Literals are kept sorted by
/// variable. Construction rejects clauses mentioning a variable in both
/// polarities (tautologies); the empty clause is allowed and denotes false.
class Clause {
  public:
    Clause() = default;
    explicit Clause(std::vector<Lit> lits);

    const std::vector<Lit>& lits() const { return lits_; }
    size_t size() const { return lits_.size(); }
    bool empty() const { return lits_.empty(); }

    bool contains(Lit l) const;
    bool contains_var(Var v) const;

    /// Clause with every literal of the given variable removed.
    Clause without_var(Var v) const;

    auto begin() const { return lits_.begin(); }
    auto end() const { return lits_.end(); }

    bool operator==(const Clause& o) const { return lits_ == o.lits_; }
    bool operator<(const Clause& o) const;

  private:
    std::vector<Lit> lits_; // sorted by Lit::index
};

/// Provenance of an auxiliary variable.
enum class AuxTag { Tseitin, Extension, Bva };

const char* aux_tag_name(AuxTag t);
std::optional<AuxTag> aux_tag_from_name(const std::string& name);

/// A CNF: clause list over variables 1..universe plus a registry of
/// auxiliary variables. Clause order is insertion order and is preserved
/// by every operation. Values are immutable once built; operations return
/// new values.
class Cnf {
  public:
    Cnf() = default;
    explicit Cnf(Var universe) : universe_(universe) {}
    Cnf(Var universe, std::vector<Clause> clauses);

    Var universe() const { return universe_; }
    const std::vector<Clause>& clauses() const { return clauses_; }
    size_t clause_count() const { return clauses_.size(); }

    const std::map<Var, AuxTag>& aux_registry() const { return aux_; }
    std::vector<Var> aux_vars() const;
    bool is_aux(Var v) const { return aux_.count(v) != 0; }

    /// Literals this CNF has been conditioned on, in application order.
    const std::vector<Lit>& assigned() const { return assigned_; }

    /// Variables of the universe that are neither assigned nor auxiliary.
    std::vector<Var> original_vars() const;

    void add_clause(Clause c);
    void register_aux(Var v, AuxTag tag);

    /// Extends the universe by one fresh variable and returns it.
    Var fresh_var();

    bool has_empty_clause() const;

    /// Set of variables occurring in clauses.
    VarSet clause_vars() const;

    bool operator==(const Cnf& o) const;

  private:
    friend Cnf condition(const Cnf&, const std::vector<Lit>&);

    Var universe_ = 0;
    std::vector<Clause> clauses_;
    std::map<Var, AuxTag> aux_;
    std::vector<Lit> assigned_;
};

// -- DIMACS ------------------------------------------------------------

/// Parses DIMACS CNF text. Comment lines `c ...` are skipped except for
/// `c aux <var> <tag>` annotations, which populate the aux registry.
/// Clause literals may span lines; each clause ends with 0. Errors on a
/// malformed header, out-of-range literals, a clause count that does not
/// match the header, or a tautologous clause.
Cnf parse_dimacs(const std::string& text);
Cnf parse_dimacs_file(const std::string& path);

/// Serializes a CNF. Aux annotations come first, then the header, then
/// one clause per line. parse_dimacs(write_dimacs(c)) == c, and the
/// output of this writer round-trips byte-identically.
std::string write_dimacs(const Cnf& cnf);
void write_dimacs_file(const Cnf& cnf, const std::string& path);

// -- Operations --------------------------------------------------------

/// Conditions the CNF on a set of literals: clauses containing a literal
/// are dropped, complements are deleted from the rest. The conditioned
/// variables are recorded as assigned. Errors if lits mentions a variable
/// twice in opposite polarities. The result may contain the empty clause.
Cnf condition(const Cnf& cnf, const std::vector<Lit>& lits);

struct UnitPropResult {
    bool conflict = false;
    Cnf residual;           // meaningful only when !conflict
    std::vector<Lit> implied;
};

/// Conditions on unit clauses to fixpoint.
UnitPropResult unit_propagate(const Cnf& cnf);

/// Partition of the clauses into variable-disjoint groups, ordered by the
/// smallest variable occurring in each group. Empty clauses, having no
/// variables, form their own leading component.
std::vector<Cnf> connected_components(const Cnf& cnf);

/// Variables as vertices, edges between co-occurring pairs.
class PrimalGraph {
  public:
    PrimalGraph() = default;
    PrimalGraph(std::vector<Var> vertices, std::set<std::pair<Var, Var>> edges);

    const std::vector<Var>& vertices() const { return vertices_; }
    const std::set<std::pair<Var, Var>>& edges() const { return edges_; }
    bool adjacent(Var u, Var v) const;
    const std::vector<Var>& neighbors(Var v) const;
    size_t vertex_count() const { return vertices_.size(); }

  private:
    std::vector<Var> vertices_;                 // sorted
    std::set<std::pair<Var, Var>> edges_;       // normalized u < v
    std::map<Var, std::vector<Var>> adjacency_; // sorted neighbor lists
};

PrimalGraph primal_graph(const Cnf& cnf);

} // namespace forge
