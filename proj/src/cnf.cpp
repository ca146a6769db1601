#include "forge/cnf.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

namespace forge {

// -- Clause ------------------------------------------------------------

Clause::Clause(std::vector<Lit> lits) : lits_(std::move(lits)) {
    std::sort(lits_.begin(), lits_.end());
    lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
    for (size_t i = 1; i < lits_.size(); ++i)
        if (lits_[i].var() == lits_[i - 1].var())
            throw Error("tautologous clause: variable " + std::to_string(lits_[i].var()) +
                        " occurs in both polarities");
}

bool Clause::contains(Lit l) const {
    return std::binary_search(lits_.begin(), lits_.end(), l);
}

bool Clause::contains_var(Var v) const {
    return contains(Lit(v, true)) || contains(Lit(v, false));
}

Clause Clause::without_var(Var v) const {
    std::vector<Lit> out;
    out.reserve(lits_.size());
    for (Lit l : lits_)
        if (l.var() != v)
            out.push_back(l);
    Clause c;
    c.lits_ = std::move(out);
    return c;
}

bool Clause::operator<(const Clause& o) const {
    return std::lexicographical_compare(lits_.begin(), lits_.end(), o.lits_.begin(),
                                        o.lits_.end());
}

// -- AuxTag ------------------------------------------------------------

const char* aux_tag_name(AuxTag t) {
    switch (t) {
    case AuxTag::Tseitin: return "tseitin";
    case AuxTag::Extension: return "extension";
    case AuxTag::Bva: return "bva";
    }
    return "?";
}

std::optional<AuxTag> aux_tag_from_name(const std::string& name) {
    if (name == "tseitin") return AuxTag::Tseitin;
    if (name == "extension") return AuxTag::Extension;
    if (name == "bva") return AuxTag::Bva;
    return std::nullopt;
}

// -- Cnf ---------------------------------------------------------------

Cnf::Cnf(Var universe, std::vector<Clause> clauses) : universe_(universe) {
    for (auto& c : clauses)
        add_clause(std::move(c));
}

void Cnf::add_clause(Clause c) {
    for (Lit l : c)
        if (l.var() > universe_)
            throw Error("literal " + std::to_string(l.to_dimacs()) + " exceeds universe " +
                        std::to_string(universe_));
    clauses_.push_back(std::move(c));
}

void Cnf::register_aux(Var v, AuxTag tag) {
    if (v < 1 || v > universe_)
        throw Error("aux variable " + std::to_string(v) + " outside universe");
    aux_[v] = tag;
}

Var Cnf::fresh_var() { return ++universe_; }

std::vector<Var> Cnf::aux_vars() const {
    std::vector<Var> out;
    out.reserve(aux_.size());
    for (auto& [v, t] : aux_)
        out.push_back(v);
    return out;
}

std::vector<Var> Cnf::original_vars() const {
    VarSet skip(universe_);
    for (auto& [v, t] : aux_)
        skip.add(v);
    for (Lit l : assigned_)
        skip.add(l.var());
    std::vector<Var> out;
    for (Var v = 1; v <= universe_; ++v)
        if (!skip.contains(v))
            out.push_back(v);
    return out;
}

bool Cnf::has_empty_clause() const {
    for (auto& c : clauses_)
        if (c.empty())
            return true;
    return false;
}

VarSet Cnf::clause_vars() const {
    VarSet s(universe_);
    for (auto& c : clauses_)
        for (Lit l : c)
            s.add(l.var());
    return s;
}

bool Cnf::operator==(const Cnf& o) const {
    return universe_ == o.universe_ && clauses_ == o.clauses_ && aux_ == o.aux_;
}

// -- DIMACS ------------------------------------------------------------

Cnf parse_dimacs(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    Var universe = 0;
    long declared_clauses = 0;
    std::vector<std::pair<Var, AuxTag>> aux;
    std::vector<Clause> clauses;
    std::vector<Lit> current;
    bool clause_open = false;

    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (line[0] == 'c') {
            std::istringstream ls(line);
            std::string tag, word;
            ls >> tag >> word;
            if (word == "aux") {
                Var v;
                std::string name;
                if (!(ls >> v >> name))
                    throw ParseError("malformed aux annotation: " + line);
                auto t = aux_tag_from_name(name);
                if (!t)
                    throw ParseError("unknown aux tag '" + name + "'");
                aux.emplace_back(v, *t);
            }
            continue;
        }
        if (line[0] == 'p') {
            std::istringstream ls(line);
            std::string p, fmt;
            long v = -1, c = -1;
            if (!(ls >> p >> fmt >> v >> c) || fmt != "cnf" || v < 0 || c < 0)
                throw ParseError("malformed DIMACS header: " + line);
            std::string rest;
            if (ls >> rest)
                throw ParseError("malformed DIMACS header: " + line);
            have_header = true;
            universe = static_cast<Var>(v);
            declared_clauses = c;
            continue;
        }
        if (!have_header)
            throw ParseError("clause data before DIMACS header");
        std::istringstream ls(line);
        long code;
        while (ls >> code) {
            if (code == 0) {
                clauses.emplace_back(std::move(current));
                current.clear();
                clause_open = false;
            } else {
                if (code > universe || -code > universe)
                    throw ParseError("literal " + std::to_string(code) + " exceeds header universe " +
                                     std::to_string(universe));
                current.push_back(Lit::from_dimacs(static_cast<int>(code)));
                clause_open = true;
            }
        }
        if (!ls.eof()) {
            std::string bad;
            ls.clear();
            ls >> bad;
            throw ParseError("unexpected token '" + bad + "' in clause data");
        }
    }
    if (!have_header)
        throw ParseError("missing DIMACS header");
    if (clause_open)
        throw ParseError("unterminated clause at end of input");
    if (static_cast<long>(clauses.size()) != declared_clauses)
        throw ParseError("clause count mismatch: header says " + std::to_string(declared_clauses) +
                         ", found " + std::to_string(clauses.size()));

    Cnf cnf(universe, std::move(clauses));
    for (auto& [v, t] : aux) {
        if (v < 1 || v > universe)
            throw ParseError("aux annotation for variable " + std::to_string(v) +
                             " outside universe");
        cnf.register_aux(v, t);
    }
    return cnf;
}

Cnf parse_dimacs_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dimacs(buf.str());
}

std::string write_dimacs(const Cnf& cnf) {
    std::ostringstream out;
    for (auto& [v, t] : cnf.aux_registry())
        out << "c aux " << v << ' ' << aux_tag_name(t) << '\n';
    out << "p cnf " << cnf.universe() << ' ' << cnf.clause_count() << '\n';
    for (auto& c : cnf.clauses()) {
        for (Lit l : c)
            out << l.to_dimacs() << ' ';
        out << "0\n";
    }
    return out.str();
}

void write_dimacs_file(const Cnf& cnf, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path);
    out << write_dimacs(cnf);
}

// -- Conditioning and unit propagation ----------------------------------

Cnf condition(const Cnf& cnf, const std::vector<Lit>& lits) {
    VarSet pos(cnf.universe()), neg(cnf.universe());
    for (Lit l : lits) {
        auto& mine = l.positive() ? pos : neg;
        auto& other = l.positive() ? neg : pos;
        if (other.contains(l.var()))
            throw Error("contradictory literal set: variable " + std::to_string(l.var()));
        mine.add(l.var());
    }

    Cnf out(cnf.universe());
    for (auto& [v, t] : cnf.aux_registry())
        out.register_aux(v, t);
    out.assigned_ = cnf.assigned();
    for (Lit l : lits)
        out.assigned_.push_back(l);

    for (auto& c : cnf.clauses()) {
        bool satisfied = false;
        std::vector<Lit> kept;
        kept.reserve(c.size());
        for (Lit l : c) {
            bool assigned_true = l.positive() ? pos.contains(l.var()) : neg.contains(l.var());
            bool assigned_false = l.positive() ? neg.contains(l.var()) : pos.contains(l.var());
            if (assigned_true) {
                satisfied = true;
                break;
            }
            if (!assigned_false)
                kept.push_back(l);
        }
        if (!satisfied)
            out.add_clause(Clause(std::move(kept)));
    }
    return out;
}

UnitPropResult unit_propagate(const Cnf& cnf) {
    UnitPropResult res;
    res.residual = cnf;
    while (true) {
        if (res.residual.has_empty_clause()) {
            res.conflict = true;
            return res;
        }
        std::vector<Lit> units;
        VarSet seen(res.residual.universe());
        for (auto& c : res.residual.clauses()) {
            if (c.size() == 1) {
                Lit u = c.lits()[0];
                if (seen.contains(u.var())) {
                    // both polarities as units is a conflict; same polarity is a duplicate
                    bool dup = std::find(units.begin(), units.end(), u) != units.end();
                    if (!dup) {
                        res.conflict = true;
                        return res;
                    }
                } else {
                    seen.add(u.var());
                    units.push_back(u);
                }
            }
        }
        if (units.empty())
            return res;
        res.residual = condition(res.residual, units);
        for (Lit u : units)
            res.implied.push_back(u);
    }
}

// -- Components ----------------------------------------------------------

std::vector<Cnf> connected_components(const Cnf& cnf) {
    size_t n = cnf.clause_count();
    if (n == 0)
        return {};

    // union-find over clause indices, merged through shared variables
    std::vector<int> parent(n);
    for (size_t i = 0; i < n; ++i)
        parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    auto merge = [&](int a, int b) { parent[find(a)] = find(b); };

    std::map<Var, int> var_home;
    for (size_t i = 0; i < n; ++i)
        for (Lit l : cnf.clauses()[i]) {
            auto [it, fresh] = var_home.emplace(l.var(), static_cast<int>(i));
            if (!fresh)
                merge(static_cast<int>(i), it->second);
        }

    // empty clauses share a synthetic root so they land in one component
    int empty_root = -1;
    for (size_t i = 0; i < n; ++i)
        if (cnf.clauses()[i].empty()) {
            if (empty_root < 0)
                empty_root = static_cast<int>(i);
            else
                merge(static_cast<int>(i), empty_root);
        }

    std::map<int, std::vector<size_t>> groups;
    for (size_t i = 0; i < n; ++i)
        groups[find(static_cast<int>(i))].push_back(i);

    std::vector<std::pair<Var, std::vector<size_t>>> ordered;
    for (auto& [root, idxs] : groups) {
        Var smallest = 0; // 0 sorts first: the variable-free component
        for (size_t i : idxs)
            for (Lit l : cnf.clauses()[i])
                if (smallest == 0 || l.var() < smallest)
                    smallest = l.var();
        ordered.emplace_back(smallest, idxs);
    }
    std::sort(ordered.begin(), ordered.end(),
              [](auto& a, auto& b) { return a.first < b.first; });

    std::vector<Cnf> out;
    for (auto& [v, idxs] : ordered) {
        Cnf part(cnf.universe());
        for (size_t i : idxs)
            part.add_clause(cnf.clauses()[i]);
        out.push_back(std::move(part));
    }
    return out;
}

// -- Primal graph ---------------------------------------------------------

PrimalGraph::PrimalGraph(std::vector<Var> vertices, std::set<std::pair<Var, Var>> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
    for (Var v : vertices_)
        adjacency_[v];
    for (auto& [u, v] : edges_) {
        if (u == v)
            throw Error("self-loop in primal graph");
        adjacency_.at(u).push_back(v);
        adjacency_.at(v).push_back(u);
    }
    for (auto& [v, ns] : adjacency_)
        std::sort(ns.begin(), ns.end());
}

bool PrimalGraph::adjacent(Var u, Var v) const {
    if (u > v)
        std::swap(u, v);
    return edges_.count({u, v}) != 0;
}

const std::vector<Var>& PrimalGraph::neighbors(Var v) const {
    auto it = adjacency_.find(v);
    if (it == adjacency_.end())
        throw Error("vertex " + std::to_string(v) + " not in graph");
    return it->second;
}

PrimalGraph primal_graph(const Cnf& cnf) {
    std::set<Var> verts;
    std::set<std::pair<Var, Var>> edges;
    for (auto& c : cnf.clauses()) {
        auto& ls = c.lits();
        for (size_t i = 0; i < ls.size(); ++i) {
            verts.insert(ls[i].var());
            for (size_t j = i + 1; j < ls.size(); ++j) {
                Var u = ls[i].var(), v = ls[j].var();
                if (u > v)
                    std::swap(u, v);
                edges.insert({u, v});
            }
        }
    }
    return PrimalGraph(std::vector<Var>(verts.begin(), verts.end()), std::move(edges));
}

} // namespace forge
