#include "forge/formula.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace forge {

Formula Formula::var(Var v) {
    if (v < 1)
        throw Error("formula variable must be positive");
    Formula f(Kind::Var);
    f.var_ = v;
    return f;
}

Formula Formula::constant(bool value) {
    Formula f(Kind::Const);
    f.value_ = value;
    return f;
}

Formula Formula::negate(Formula child) {
    Formula f(Kind::Not);
    f.kids_.push_back(std::move(child));
    return f;
}

Formula Formula::conj(std::vector<Formula> fs) {
    if (fs.empty())
        throw Error("and requires at least one operand");
    Formula f(Kind::And);
    f.kids_ = std::move(fs);
    return f;
}

Formula Formula::disj(std::vector<Formula> fs) {
    if (fs.empty())
        throw Error("or requires at least one operand");
    Formula f(Kind::Or);
    f.kids_ = std::move(fs);
    return f;
}

Formula Formula::exclusive_or(Formula a, Formula b) {
    Formula f(Kind::Xor);
    f.kids_.push_back(std::move(a));
    f.kids_.push_back(std::move(b));
    return f;
}

Formula Formula::iff(Formula a, Formula b) {
    Formula f(Kind::Iff);
    f.kids_.push_back(std::move(a));
    f.kids_.push_back(std::move(b));
    return f;
}

Var Formula::variable() const {
    if (kind_ != Kind::Var)
        throw Error("not a variable node");
    return var_;
}

bool Formula::const_value() const {
    if (kind_ != Kind::Const)
        throw Error("not a constant node");
    return value_;
}

Var Formula::max_var() const {
    Var m = kind_ == Kind::Var ? var_ : 0;
    for (auto& k : kids_)
        m = std::max(m, k.max_var());
    return m;
}

int Formula::gate_count() const {
    int g = (kind_ == Kind::And || kind_ == Kind::Or || kind_ == Kind::Xor ||
             kind_ == Kind::Iff)
                ? 1
                : 0;
    for (auto& k : kids_)
        g += k.gate_count();
    return g;
}

bool Formula::operator==(const Formula& o) const {
    return kind_ == o.kind_ && var_ == o.var_ && value_ == o.value_ && kids_ == o.kids_;
}

// -- Text format ---------------------------------------------------------

namespace {

struct Tokens {
    std::vector<std::string> toks;
    size_t pos = 0;

    const std::string& peek() const {
        static const std::string kEnd = "";
        return pos < toks.size() ? toks[pos] : kEnd;
    }
    std::string next() {
        if (pos >= toks.size())
            throw ParseError("unexpected end of formula text");
        return toks[pos++];
    }
};

Tokens tokenize(const std::string& text) {
    Tokens t;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            t.toks.push_back(cur);
            cur.clear();
        }
    };
    for (char c : text) {
        if (c == '(' || c == ')') {
            flush();
            t.toks.push_back(std::string(1, c));
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else {
            cur.push_back(c);
        }
    }
    flush();
    return t;
}

Formula parse_expr(Tokens& t) {
    std::string tok = t.next();
    if (tok == "true")
        return Formula::constant(true);
    if (tok == "false")
        return Formula::constant(false);
    if (tok != "(")
        throw ParseError("expected '(', 'true' or 'false', got '" + tok + "'");
    std::string op = t.next();
    if (op == "var") {
        std::string num = t.next();
        try {
            size_t used = 0;
            int v = std::stoi(num, &used);
            if (used != num.size())
                throw std::invalid_argument(num);
            if (t.next() != ")")
                throw ParseError("expected ')' after variable index");
            return Formula::var(v);
        } catch (std::logic_error&) {
            throw ParseError("bad variable index '" + num + "'");
        }
    }
    std::vector<Formula> kids;
    while (t.peek() != ")") {
        if (t.peek().empty())
            throw ParseError("missing ')' in formula text");
        kids.push_back(parse_expr(t));
    }
    t.next(); // ')'
    if (op == "not") {
        if (kids.size() != 1)
            throw ParseError("not takes exactly one operand");
        return Formula::negate(std::move(kids[0]));
    }
    if (op == "and")
        return Formula::conj(std::move(kids));
    if (op == "or")
        return Formula::disj(std::move(kids));
    if (op == "xor" || op == "iff") {
        if (kids.size() != 2)
            throw ParseError(op + " takes exactly two operands");
        return op == "xor" ? Formula::exclusive_or(std::move(kids[0]), std::move(kids[1]))
                           : Formula::iff(std::move(kids[0]), std::move(kids[1]));
    }
    throw ParseError("unknown operator '" + op + "'");
}

} // namespace

Formula parse_formula(const std::string& text) {
    Tokens t = tokenize(text);
    Formula f = parse_expr(t);
    if (t.pos != t.toks.size())
        throw ParseError("trailing tokens after formula");
    return f;
}

Formula parse_formula_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_formula(buf.str());
}

std::string write_formula(const Formula& f) {
    switch (f.kind()) {
    case Formula::Kind::Const:
        return f.const_value() ? "true" : "false";
    case Formula::Kind::Var:
        return "(var " + std::to_string(f.variable()) + ")";
    default:
        break;
    }
    std::string op;
    switch (f.kind()) {
    case Formula::Kind::Not: op = "not"; break;
    case Formula::Kind::And: op = "and"; break;
    case Formula::Kind::Or: op = "or"; break;
    case Formula::Kind::Xor: op = "xor"; break;
    case Formula::Kind::Iff: op = "iff"; break;
    default: break;
    }
    std::string out = "(" + op;
    for (auto& k : f.operands()) {
        out += ' ';
        out += write_formula(k);
    }
    out += ')';
    return out;
}

} // namespace forge
