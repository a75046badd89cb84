#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "jetvar/dsl.hpp"
#include "jetvar/error.hpp"

namespace jetvar {

namespace {

constexpr int kMaxDepth = 200;
constexpr int kMaxExponent = 32;
constexpr std::size_t kMaxDigits = 2000;
constexpr double kMaxTerms = 200000;

char const* const kKeywords[] = {"bundle", "base", "fields", "params", "metric", "lagrangian",
                                 "vfield", "gauge", "source", "sin", "cos", "exp", "d"};

bool is_keyword(std::string const& s)
{
    return std::find(std::begin(kKeywords), std::end(kKeywords), s) != std::end(kKeywords);
}

enum class Tok { ident, number, punct, arrow, end };

struct Token
{
    Tok kind = Tok::end;
    std::string text;   ///< identifier (without suffix), digits, or punctuation
    std::string suffix; ///< text after '_' in an identifier, if any
    bool has_suffix = false;
    int line = 1;
    int column = 1;
};

class Lexer
{
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t;
            t.line = line_;
            t.column = col_;
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            unsigned char c = static_cast<unsigned char>(src_[pos_]);
            if (std::isalpha(c)) {
                t.kind = Tok::ident;
                t.text = take_alnum();
                if (peek() == '_') {
                    advance();
                    t.has_suffix = true;
                    t.suffix = take_alnum();
                    if (t.suffix.empty())
                        fail("expected derivative letters after '_'");
                }
            } else if (std::isdigit(c)) {
                t.kind = Tok::number;
                t.text = take_digits();
                if (peek() == '.')
                    fail("decimal literals are not supported; write a fraction p/q");
                if (t.text.size() > kMaxDigits)
                    fail("integer literal too long");
            } else if (c == '-' && peek(1) == '>') {
                t.kind = Tok::arrow;
                t.text = "->";
                advance();
                advance();
            } else if (std::string_view("{}[]():;,=+-*/^").find(static_cast<char>(c)) != std::string_view::npos) {
                t.kind = Tok::punct;
                t.text = std::string(1, static_cast<char>(c));
                advance();
            } else if (c == '.') {
                fail("decimal literals are not supported; write a fraction p/q");
            } else {
                fail(c < 0x20 || c >= 0x7f ? "unexpected byte " + std::to_string(c)
                                           : std::string("unexpected character '") + static_cast<char>(c) + "'");
            }
            out.push_back(std::move(t));
        }
    }

private:
    [[noreturn]] void fail(std::string const& msg) const { throw ParseError(msg, line_, col_); }

    char peek(std::size_t ahead = 0) const
    {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance()
    {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space()
    {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n')
                    advance();
            } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                advance();
            } else {
                break;
            }
        }
    }

    std::string take_alnum()
    {
        std::string s;
        while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) {
            s += src_[pos_];
            advance();
        }
        return s;
    }

    std::string take_digits()
    {
        std::string s;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            s += src_[pos_];
            advance();
        }
        return s;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

/// Placeholder parameter standing for the basis vector d/dX inside a vfield.
std::string basis_name(std::string const& target) { return "d/d" + target; }

class Parser
{
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    TheoryFile theory()
    {
        TheoryFile out;
        expect_word("bundle");
        out.bundle = bundle_block();
        bundle_ = &out.bundle;
        std::set<std::string> names;
        while (!at_end()) {
            if (accept(";"))
                continue;
            Token const& kw = cur();
            if (kw.kind != Tok::ident || kw.has_suffix)
                fail(kw, "expected a statement keyword");
            std::string word = kw.text;
            if (word == "bundle")
                fail(kw, "only one bundle may be declared");
            if (word == "metric") {
                if (out.metric)
                    fail(kw, "only one metric may be declared");
                next();
                out.metric = metric(names);
                metric_ = &*out.metric;
            } else if (word == "lagrangian") {
                next();
                std::string name = statement_name(names);
                expect("=");
                out.lagrangians.push_back({name, expr()});
            } else if (word == "vfield") {
                next();
                std::string name = statement_name(names);
                expect("=");
                out.vfields.push_back({name, vfield()});
            } else if (word == "gauge") {
                next();
                out.gauges.push_back(gauge(names));
            } else if (word == "source") {
                next();
                out.sources.push_back(source(names));
            } else {
                fail(kw, "unknown statement '" + word + "'");
            }
        }
        return out;
    }

    Expr lone_expr(BundleSpec const& b)
    {
        bundle_ = &b;
        Expr e = expr();
        if (!at_end())
            fail(cur(), "unexpected trailing input");
        return e;
    }

private:
    // ---- token helpers

    Token const& cur() const { return toks_[pos_]; }
    Token const& ahead(std::size_t k) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at_end() const { return cur().kind == Tok::end; }
    void next()
    {
        if (!at_end())
            ++pos_;
    }

    [[noreturn]] static void fail(Token const& t, std::string const& msg) { throw ParseError(msg, t.line, t.column); }

    static std::string describe(Token const& t)
    {
        switch (t.kind) {
        case Tok::end:
            return "end of input";
        case Tok::ident:
            return "'" + t.text + (t.has_suffix ? "_" + t.suffix : "") + "'";
        default:
            return "'" + t.text + "'";
        }
    }

    bool is_punct(std::string const& p) const
    {
        return (cur().kind == Tok::punct || cur().kind == Tok::arrow) && cur().text == p;
    }

    bool accept(std::string const& p)
    {
        if (!is_punct(p))
            return false;
        next();
        return true;
    }

    void expect(std::string const& p)
    {
        if (!accept(p))
            fail(cur(), "expected '" + p + "', found " + describe(cur()));
    }

    void expect_word(std::string const& w)
    {
        if (cur().kind != Tok::ident || cur().has_suffix || cur().text != w)
            fail(cur(), "expected '" + w + "', found " + describe(cur()));
        next();
    }

    std::string plain_name(char const* what)
    {
        Token const& t = cur();
        if (t.kind != Tok::ident)
            fail(t, std::string("expected ") + what + ", found " + describe(t));
        if (t.has_suffix)
            fail(t, std::string(what) + " names may not contain '_'");
        if (is_keyword(t.text))
            fail(t, "'" + t.text + "' is reserved");
        std::string s = t.text;
        next();
        return s;
    }

    // ---- statements

    std::vector<std::string> name_list(char const* what)
    {
        expect("[");
        std::vector<std::string> out;
        if (accept("]"))
            return out;
        do {
            Token const& at = cur();
            std::string n = plain_name(what);
            if (std::find(out.begin(), out.end(), n) != out.end())
                fail(at, "duplicate name '" + n + "'");
            out.push_back(n);
        } while (accept(","));
        expect("]");
        return out;
    }

    BundleSpec bundle_block()
    {
        Token const& open = cur();
        expect("{");
        std::optional<std::vector<std::string>> base, fields, params;
        while (!accept("}")) {
            if (accept(";"))
                continue;
            Token const& key = cur();
            if (key.kind != Tok::ident || key.has_suffix)
                fail(key, "expected 'base', 'fields' or 'params', found " + describe(key));
            std::string k = key.text;
            next();
            expect(":");
            auto& slot = k == "base" ? base : k == "fields" ? fields : k == "params" ? params : base;
            if (k != "base" && k != "fields" && k != "params")
                fail(key, "unknown bundle entry '" + k + "'");
            if (slot)
                fail(key, "duplicate bundle entry '" + k + "'");
            slot = name_list(k == "base" ? "coordinate" : k == "fields" ? "field" : "parameter");
        }
        if (!base || base->empty())
            fail(open, "bundle needs a non-empty base list");
        if (!fields || fields->empty())
            fail(open, "bundle needs a non-empty fields list");
        try {
            return BundleSpec(*base, *fields, params.value_or(std::vector<std::string>{}));
        } catch (Error const& e) {
            fail(open, e.what());
        }
    }

    std::string statement_name(std::set<std::string>& names)
    {
        Token const& at = cur();
        std::string n = plain_name("declaration");
        if (!names.insert(n).second)
            fail(at, "'" + n + "' is already declared");
        if (bundle_->declares(n))
            fail(at, "'" + n + "' clashes with a bundle name");
        return n;
    }

    Rational constant()
    {
        Token const& at = cur();
        Expr e = expr();
        auto r = e.rational_value();
        if (!r)
            fail(at, "metric entries must be rational constants");
        return *r;
    }

    MetricDecl metric(std::set<std::string>& names)
    {
        MetricDecl m;
        m.name = statement_name(names);
        expect("=");
        Token const& at = cur();
        std::size_t n = bundle_->dimension();
        expect("[");
        do {
            expect("[");
            std::vector<Rational> row;
            do {
                row.push_back(constant());
            } while (accept(","));
            expect("]");
            m.entries.push_back(std::move(row));
        } while (accept(","));
        expect("]");
        if (m.entries.size() != n)
            fail(at, "metric must be " + std::to_string(n) + "x" + std::to_string(n));
        for (std::size_t i = 0; i < n; ++i) {
            if (m.entries[i].size() != n)
                fail(at, "metric must be " + std::to_string(n) + "x" + std::to_string(n));
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (m.entries[i][j] != m.entries[j][i])
                    fail(at, "metric must be symmetric");
        return m;
    }

    ProjectableVectorField vfield()
    {
        Token const& at = cur();
        basis_allowed_ = true;
        Expr e = expr();
        basis_allowed_ = false;

        std::size_t n = bundle_->dimension();
        std::size_t m = bundle_->field_count();
        auto is_basis = [](Atom const& a) { return a.is_param() && a.name.rfind("d/d", 0) == 0; };
        std::map<Atom, Expr> coeffs;
        try {
            coeffs = linear_coefficients(e, is_basis);
        } catch (Error const&) {
            fail(at, "a vector field must be linear in the basis vectors d/dX");
        }
        ProjectableVectorField u{std::vector<Expr>(n), std::vector<Expr>(m)};
        for (auto& [atom, c] : coeffs) {
            if (c.depends_on(is_basis))
                fail(at, "a vector field must be linear in the basis vectors d/dX");
            std::string target = atom.name.substr(3);
            if (auto b = bundle_->base_index(target)) {
                if (c.depends_on([](Atom const& a) { return a.is_jet(); }))
                    fail(at, "base component along d/d" + target + " may not depend on fields");
                u.base[static_cast<std::size_t>(*b)] = c;
            } else if (auto f = bundle_->field_index(target)) {
                u.fiber[static_cast<std::size_t>(*f)] = c;
            }
        }
        return u;
    }

    GaugeDecl gauge(std::set<std::string>& names)
    {
        GaugeDecl g;
        g.name = statement_name(names);
        expect("(");
        do {
            Token const& at = cur();
            std::string p = plain_name("parameter");
            if (bundle_->declares(p) || names.count(p) ||
                std::find(g.parameters.begin(), g.parameters.end(), p) != g.parameters.end())
                fail(at, "gauge parameter '" + p + "' is already declared");
            g.parameters.push_back(p);
        } while (accept(","));
        expect(")");
        expect(":");
        BundleSpec extended = g.extended(*bundle_);
        BundleSpec const* saved = bundle_;
        bundle_ = &extended;
        g.action = assignments(saved->field_count());
        bundle_ = saved;
        try {
            g.generator(*bundle_);
        } catch (Error const& e) {
            fail(cur(), std::string("gauge ") + g.name + ": " + e.what());
        }
        return g;
    }

    SourceDecl source(std::set<std::string>& names)
    {
        SourceDecl s;
        s.name = statement_name(names);
        expect(":");
        s.components = assignments(bundle_->field_count());
        return s;
    }

    /// field -> expr, ... over the first `fields` fields of the current bundle.
    std::vector<Expr> assignments(std::size_t fields)
    {
        std::vector<Expr> out(fields);
        std::vector<bool> seen(fields);
        do {
            Token const& at = cur();
            std::string f = plain_name("field");
            auto idx = bundle_->field_index(f);
            if (!idx || static_cast<std::size_t>(*idx) >= fields)
                fail(at, "'" + f + "' is not a field of the bundle");
            if (seen[static_cast<std::size_t>(*idx)])
                fail(at, "field '" + f + "' assigned twice");
            seen[static_cast<std::size_t>(*idx)] = true;
            expect("->");
            out[static_cast<std::size_t>(*idx)] = expr();
        } while (accept(","));
        return out;
    }

    // ---- expressions

    struct DepthGuard
    {
        DepthGuard(Parser& p) : p_(p)
        {
            if (++p_.depth_ > kMaxDepth)
                fail(p_.cur(), "expression nested too deeply");
        }
        ~DepthGuard() { --p_.depth_; }
        Parser& p_;
    };

    static void check_size(Token const& at, double terms)
    {
        if (terms > kMaxTerms)
            fail(at, "expression too large to expand");
    }

    Expr expr()
    {
        DepthGuard guard(*this);
        Expr out = term();
        for (;;) {
            if (accept("+"))
                out += term();
            else if (accept("-"))
                out -= term();
            else
                return out;
        }
    }

    Expr term()
    {
        Expr out = unary();
        for (;;) {
            Token const& at = cur();
            if (accept("*")) {
                Expr rhs = unary();
                check_size(at, static_cast<double>(out.size()) * static_cast<double>(rhs.size()));
                out = out * rhs;
            } else if (accept("/")) {
                Token const& den_at = cur();
                Expr rhs = unary();
                auto r = rhs.rational_value();
                if (!r)
                    fail(den_at, "division is only allowed by nonzero constants");
                if (*r == 0)
                    fail(den_at, "division by zero");
                out = out * Expr(Rational(1) / *r);
            } else {
                return out;
            }
        }
    }

    Expr unary()
    {
        DepthGuard guard(*this);
        if (accept("-"))
            return -unary();
        if (accept("+"))
            return unary();
        return power();
    }

    Expr power()
    {
        Expr base = primary();
        Token const& at = cur();
        if (!accept("^"))
            return base;
        Token const& e = cur();
        if (e.kind != Tok::number)
            fail(e, "exponent must be a non-negative integer literal");
        if (e.text.size() > 2 || std::stoi(e.text) > kMaxExponent)
            fail(e, "exponent larger than " + std::to_string(kMaxExponent));
        int k = std::stoi(e.text);
        next();
        if (base.size() > 1) {
            // number of monomials of degree k in `size` symbols bounds the expansion
            double s = static_cast<double>(base.size());
            double est = std::exp(std::lgamma(s + k) - std::lgamma(k + 1.0) - std::lgamma(s));
            check_size(at, est);
        }
        return base.pow(static_cast<unsigned>(k));
    }

    Expr primary()
    {
        Token const& t = cur();
        if (t.kind == Tok::number) {
            Rational r(t.text, 10);
            next();
            return Expr(r);
        }
        if (accept("(")) {
            Expr e = expr();
            expect(")");
            return e;
        }
        if (t.kind != Tok::ident)
            fail(t, "expected an expression, found " + describe(t));

        std::string name = t.text;
        if (name == "sin" || name == "cos" || name == "exp") {
            if (t.has_suffix)
                fail(t, "unexpected '_' after function name");
            next();
            Function f = name == "sin" ? Function::sin : name == "cos" ? Function::cos : Function::exp;
            expect("(");
            Expr arg = expr();
            expect(")");
            return Expr::apply(f, arg);
        }
        if (name == "d" && !t.has_suffix) {
            next();
            return basis_vector(t);
        }
        next();
        BundleSpec const& b = *bundle_;
        if (metric_ && name == metric_->name) {
            if (t.has_suffix)
                fail(t, "metric entries are written " + name + "[i,j]");
            auto idx = index_list(t);
            if (idx.size() != 2 || idx[0] >= b.dimension() || idx[1] >= b.dimension())
                fail(t, "metric index out of range");
            return Expr(metric_->entries[idx[0]][idx[1]]);
        }
        if (auto f = b.field_index(name)) {
            MultiIndex alpha(b.dimension());
            if (t.has_suffix) {
                alpha = suffix_index(t);
            } else if (is_punct("[")) {
                auto idx = index_list(t);
                if (idx.size() != b.dimension())
                    fail(t, "multi-index has " + std::to_string(idx.size()) + " entries, base has " +
                                std::to_string(b.dimension()));
                for (std::size_t k = 0; k < idx.size(); ++k)
                    alpha[k] = static_cast<int>(idx[k]);
            }
            return Expr::jet(*f, alpha);
        }
        if (t.has_suffix)
            fail(t, "'" + name + "' is not a field; only fields take derivatives");
        if (auto s = b.base_index(name))
            return Expr::coordinate(*s);
        if (b.has_param(name))
            return Expr::param(name);
        fail(t, "undeclared identifier '" + name + "'");
    }

    Expr basis_vector(Token const& d_tok)
    {
        if (!accept("/"))
            fail(d_tok, "'d' is reserved for basis vectors d/dX");
        Token const& t = cur();
        if (t.kind != Tok::ident || t.has_suffix || t.text.size() < 2 || t.text[0] != 'd')
            fail(t, "expected a basis vector d/dX");
        if (!basis_allowed_)
            fail(d_tok, "basis vectors are only allowed in vfield declarations");
        std::string target = t.text.substr(1);
        if (!bundle_->base_index(target) && !bundle_->field_index(target))
            fail(t, "undeclared coordinate '" + target + "' in basis vector");
        next();
        return Expr::param(basis_name(target));
    }

    std::vector<std::size_t> index_list(Token const& at)
    {
        expect("[");
        std::vector<std::size_t> out;
        do {
            Token const& n = cur();
            if (n.kind != Tok::number)
                fail(n, "expected a non-negative integer index");
            if (n.text.size() > 3)
                fail(n, "index too large");
            out.push_back(static_cast<std::size_t>(std::stoul(n.text)));
            next();
        } while (accept(","));
        expect("]");
        (void)at;
        return out;
    }

    /// Greedy longest match of base coordinate names against the suffix letters.
    MultiIndex suffix_index(Token const& t)
    {
        BundleSpec const& b = *bundle_;
        MultiIndex alpha(b.dimension());
        std::string const& s = t.suffix;
        std::size_t pos = 0;
        while (pos < s.size()) {
            std::size_t best = 0;
            int which = -1;
            for (std::size_t k = 0; k < b.dimension(); ++k) {
                std::string const& nm = b.base()[k];
                if (nm.size() > best && s.compare(pos, nm.size(), nm) == 0) {
                    best = nm.size();
                    which = static_cast<int>(k);
                }
            }
            if (which < 0) {
                ParseError e("undeclared coordinate '" + s.substr(pos, 1) + "' in derivative " + t.text + "_" + s,
                             t.line, t.column);
                throw e;
            }
            ++alpha[static_cast<std::size_t>(which)];
            if (alpha[static_cast<std::size_t>(which)] > 64)
                fail(t, "derivative order too large");
            pos += best;
        }
        return alpha;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    BundleSpec const* bundle_ = nullptr;
    MetricDecl const* metric_ = nullptr;
    bool basis_allowed_ = false;
    int depth_ = 0;
};

} // namespace

bool VectorFieldDecl::operator==(VectorFieldDecl const& other) const
{
    return name == other.name && field.base == other.field.base && field.fiber == other.field.fiber;
}

GaugeGenerator GaugeDecl::generator(BundleSpec const& theory) const
{
    BundleSpec b = extended(theory);
    std::vector<int> idx;
    for (auto const& p : parameters)
        idx.push_back(*b.field_index(p));
    return GaugeGenerator(b, idx, action);
}

SourceForm SourceDecl::form() const
{
    SourceForm out;
    for (std::size_t i = 0; i < components.size(); ++i)
        out.fields.push_back(static_cast<int>(i));
    out.components = components;
    return out;
}

namespace {

template <typename T>
T const* find_named(std::vector<T> const& v, std::string const& name)
{
    for (auto const& d : v)
        if (d.name == name)
            return &d;
    return nullptr;
}

} // namespace

LagrangianDecl const* TheoryFile::find_lagrangian(std::string const& name) const
{
    return find_named(lagrangians, name);
}
VectorFieldDecl const* TheoryFile::find_vfield(std::string const& name) const
{
    return find_named(vfields, name);
}
GaugeDecl const* TheoryFile::find_gauge(std::string const& name) const
{
    return find_named(gauges, name);
}
SourceDecl const* TheoryFile::find_source(std::string const& name) const
{
    return find_named(sources, name);
}

TheoryFile parse(std::string_view text)
{
    return Parser(Lexer(text).run()).theory();
}

Expr parse_expr(std::string_view text, BundleSpec const& bundle)
{
    return Parser(Lexer(text).run()).lone_expr(bundle);
}

} // namespace jetvar
