#include <algorithm>
#include <sstream>

#include "jetvar/dsl.hpp"
#include "jetvar/error.hpp"
#include "json_expr.hpp"

namespace jetvar {

namespace {

bool single_letter_base(BundleSpec const& b)
{
    return std::all_of(b.base().begin(), b.base().end(), [](std::string const& s) { return s.size() == 1; });
}

std::string rational_text(Rational const& r) { return r.get_str(); }

// ---- theory-file syntax

std::string text_expr(Expr const& e, BundleSpec const& b);

std::string text_atom(Atom const& a, BundleSpec const& b)
{
    switch (a.kind) {
    case Atom::Kind::base:
        return b.base().at(static_cast<std::size_t>(a.index));
    case Atom::Kind::param:
        return a.name;
    case Atom::Kind::jet:
        break;
    }
    std::string out = b.fields().at(static_cast<std::size_t>(a.index));
    if (a.mi.is_zero())
        return out;
    if (single_letter_base(b)) {
        out += '_';
        for (std::size_t s = 0; s < a.mi.size(); ++s)
            out.append(static_cast<std::size_t>(a.mi[s]), b.base()[s][0]);
        return out;
    }
    out += '[';
    for (std::size_t s = 0; s < a.mi.size(); ++s)
        out += (s ? "," : "") + std::to_string(a.mi[s]);
    return out + ']';
}

std::string text_factor(Factor const& f, BundleSpec const& b)
{
    if (f.is_function())
        return std::string(function_name(f.fn)) + "(" + text_expr(*f.arg, b) + ")";
    return text_atom(f.atom, b);
}

std::string text_expr(Expr const& e, BundleSpec const& b)
{
    if (e.is_zero())
        return "0";
    std::string out;
    for (auto const& t : e.terms()) {
        Rational c = t.coeff;
        bool negative = c < 0;
        if (negative)
            c = -c;
        if (negative)
            out += '-';
        else if (!out.empty())
            out += '+';
        if (t.monomial.empty()) {
            out += rational_text(c);
            continue;
        }
        if (c != 1)
            out += rational_text(c) + "*";
        bool first = true;
        for (auto const& p : t.monomial.powers) {
            if (!first)
                out += '*';
            first = false;
            out += text_factor(p.factor, b);
            if (p.exponent != 1)
                out += "^" + std::to_string(p.exponent);
        }
    }
    return out;
}

// ---- LaTeX

char const* const kGreek[] = {"alpha", "beta",  "gamma", "delta", "epsilon", "zeta",  "eta",   "theta",
                              "iota",  "kappa", "lambda", "mu",   "nu",      "xi",    "pi",    "rho",
                              "sigma", "tau",   "upsilon", "phi", "chi",     "psi",   "omega", "Gamma",
                              "Delta", "Theta", "Lambda", "Xi",   "Pi",      "Sigma", "Phi",   "Psi",
                              "Omega"};

std::string latex_name(std::string const& name)
{
    if (std::find(std::begin(kGreek), std::end(kGreek), name) != std::end(kGreek))
        return "\\" + name;
    return name;
}

std::string latex_expr(Expr const& e, BundleSpec const& b);

std::string latex_atom(Atom const& a, BundleSpec const& b)
{
    switch (a.kind) {
    case Atom::Kind::base:
        return latex_name(b.base().at(static_cast<std::size_t>(a.index)));
    case Atom::Kind::param:
        return latex_name(a.name);
    case Atom::Kind::jet:
        break;
    }
    std::string out = latex_name(b.fields().at(static_cast<std::size_t>(a.index)));
    if (a.mi.is_zero())
        return out;
    bool single = single_letter_base(b);
    std::string sub;
    for (std::size_t s = 0; s < a.mi.size(); ++s) {
        for (int k = 0; k < a.mi[s]; ++k) {
            if (!single && !sub.empty())
                sub += ',';
            sub += latex_name(b.base()[s]);
        }
    }
    return out + "_{" + sub + "}";
}

std::string latex_rational(Rational const& r)
{
    if (r.get_den() == 1)
        return r.get_num().get_str();
    return "\\frac{" + r.get_num().get_str() + "}{" + r.get_den().get_str() + "}";
}

std::string latex_expr(Expr const& e, BundleSpec const& b)
{
    if (e.is_zero())
        return "0";
    std::string out;
    for (auto const& t : e.terms()) {
        Rational c = t.coeff;
        bool negative = c < 0;
        if (negative)
            c = -c;
        if (negative)
            out += '-';
        else if (!out.empty())
            out += '+';
        if (t.monomial.empty()) {
            out += latex_rational(c);
            continue;
        }
        std::vector<std::string> parts;
        if (c != 1)
            parts.push_back(latex_rational(c));
        for (auto const& p : t.monomial.powers) {
            std::string f;
            if (p.factor.is_function())
                f = std::string("\\") + function_name(p.factor.fn) + "\\left(" + latex_expr(*p.factor.arg, b) +
                    "\\right)";
            else
                f = latex_atom(p.factor.atom, b);
            if (p.exponent != 1)
                f += "^{" + std::to_string(p.exponent) + "}";
            parts.push_back(std::move(f));
        }
        for (std::size_t k = 0; k < parts.size(); ++k)
            out += (k ? " " : "") + parts[k];
    }
    return out;
}

std::string join(std::vector<std::string> const& v, char const* sep)
{
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k)
        out += (k ? sep : "") + v[k];
    return out;
}

std::string vfield_text(ProjectableVectorField const& u, BundleSpec const& b)
{
    std::vector<std::string> parts;
    auto add = [&](Expr const& c, std::string const& target) {
        if (c.is_zero())
            return;
        if (c == Expr(1))
            parts.push_back("d/d" + target);
        else
            parts.push_back("(" + text_expr(c, b) + ")*d/d" + target);
    };
    for (std::size_t s = 0; s < u.base.size() && s < b.dimension(); ++s)
        add(u.base[s], b.base()[s]);
    for (std::size_t i = 0; i < u.fiber.size() && i < b.field_count(); ++i)
        add(u.fiber[i], b.fields()[i]);
    return parts.empty() ? "0" : join(parts, " + ");
}

std::string assignments(std::vector<Expr> const& v, BundleSpec const& b)
{
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < v.size(); ++i)
        parts.push_back(b.fields()[i] + " -> " + text_expr(v[i], b));
    return join(parts, ", ");
}

} // namespace

std::string print_expr(Expr const& e, BundleSpec const& bundle) { return text_expr(e, bundle); }

std::string print_latex(Expr const& e, BundleSpec const& bundle) { return latex_expr(e, bundle); }

std::string print(TheoryFile const& t)
{
    BundleSpec const& b = t.bundle;
    std::ostringstream out;
    out << "bundle { base: [" << join(b.base(), ", ") << "]; fields: [" << join(b.fields(), ", ") << "];";
    if (!b.params().empty())
        out << " params: [" << join(b.params(), ", ") << "];";
    out << " }\n";
    if (t.metric) {
        std::vector<std::string> rows;
        for (auto const& row : t.metric->entries) {
            std::vector<std::string> cells;
            for (auto const& r : row)
                cells.push_back(rational_text(r));
            rows.push_back("[" + join(cells, ", ") + "]");
        }
        out << "metric " << t.metric->name << " = [" << join(rows, ", ") << "]\n";
    }
    for (auto const& l : t.lagrangians)
        out << "lagrangian " << l.name << " = " << text_expr(l.density, b) << "\n";
    for (auto const& v : t.vfields)
        out << "vfield " << v.name << " = " << vfield_text(v.field, b) << "\n";
    for (auto const& g : t.gauges)
        out << "gauge " << g.name << "(" << join(g.parameters, ", ") << ") : "
            << assignments(g.action, g.extended(b)) << "\n";
    for (auto const& s : t.sources)
        out << "source " << s.name << " : " << assignments(s.components, b) << "\n";
    return out.str();
}

namespace detail {

namespace {

nlohmann::ordered_json atom_json(Factor const& f, BundleSpec const& b)
{
    nlohmann::ordered_json j;
    if (f.is_function()) {
        j["fn"] = function_name(f.fn);
        j["arg"] = expr_to_json(*f.arg, b);
        return j;
    }
    Atom const& a = f.atom;
    switch (a.kind) {
    case Atom::Kind::base:
        j["coord"] = b.base().at(static_cast<std::size_t>(a.index));
        break;
    case Atom::Kind::param:
        j["param"] = a.name;
        break;
    case Atom::Kind::jet: {
        j["field"] = b.fields().at(static_cast<std::size_t>(a.index));
        auto mi = nlohmann::ordered_json::array();
        for (std::size_t s = 0; s < a.mi.size(); ++s)
            mi.push_back(a.mi[s]);
        j["mi"] = mi;
        break;
    }
    }
    return j;
}

[[noreturn]] void bad(std::string const& msg) { throw ParseError("json: " + msg, 1, 1); }

Expr atom_from_json(nlohmann::json const& j, BundleSpec const& b)
{
    if (!j.is_object())
        bad("atom must be an object");
    auto str = [&](char const* key) {
        auto const& v = j.at(key);
        if (!v.is_string())
            bad(std::string(key) + " must be a string");
        return v.get<std::string>();
    };
    Expr base;
    if (j.contains("fn")) {
        std::string fn = str("fn");
        if (!j.contains("arg"))
            bad("function atom without arg");
        Expr arg = expr_from_json(j.at("arg"), b);
        if (fn == "sin")
            base = Expr::apply(Function::sin, arg);
        else if (fn == "cos")
            base = Expr::apply(Function::cos, arg);
        else if (fn == "exp")
            base = Expr::apply(Function::exp, arg);
        else
            bad("unknown function '" + fn + "'");
    } else if (j.contains("coord")) {
        auto s = b.base_index(str("coord"));
        if (!s)
            bad("undeclared coordinate");
        base = Expr::coordinate(*s);
    } else if (j.contains("param")) {
        std::string p = str("param");
        if (!b.has_param(p))
            bad("undeclared parameter '" + p + "'");
        base = Expr::param(p);
    } else if (j.contains("field")) {
        auto f = b.field_index(str("field"));
        if (!f)
            bad("undeclared field");
        MultiIndex alpha(b.dimension());
        if (j.contains("mi")) {
            auto const& mi = j.at("mi");
            if (!mi.is_array() || mi.size() != b.dimension())
                bad("multi-index length mismatch");
            for (std::size_t s = 0; s < mi.size(); ++s) {
                if (!mi[s].is_number_unsigned() || mi[s].get<unsigned>() > 64)
                    bad("multi-index entries must be small non-negative integers");
                alpha[s] = static_cast<int>(mi[s].get<unsigned>());
            }
        }
        base = Expr::jet(*f, alpha);
    } else {
        bad("unrecognised atom");
    }
    unsigned k = 1;
    if (j.contains("pow")) {
        auto const& p = j.at("pow");
        if (!p.is_number_unsigned() || p.get<unsigned>() == 0 || p.get<unsigned>() > 1024)
            bad("pow must be a positive integer");
        k = p.get<unsigned>();
    }
    return base.pow(k);
}

} // namespace

nlohmann::ordered_json expr_to_json(Expr const& e, BundleSpec const& b)
{
    auto terms = nlohmann::ordered_json::array();
    for (auto const& t : e.terms()) {
        nlohmann::ordered_json term;
        term["coeff"] = t.coeff.get_str();
        auto atoms = nlohmann::ordered_json::array();
        for (auto const& p : t.monomial.powers) {
            auto a = atom_json(p.factor, b);
            if (p.exponent != 1)
                a["pow"] = p.exponent;
            atoms.push_back(std::move(a));
        }
        term["atoms"] = std::move(atoms);
        terms.push_back(std::move(term));
    }
    nlohmann::ordered_json out;
    out["terms"] = std::move(terms);
    return out;
}

Expr expr_from_json(nlohmann::json const& j, BundleSpec const& b)
{
    if (!j.is_object() || !j.contains("terms") || !j.at("terms").is_array())
        bad("expected an object with a \"terms\" array");
    Expr out;
    for (auto const& t : j.at("terms")) {
        if (!t.is_object() || !t.contains("coeff") || !t.at("coeff").is_string())
            bad("term needs a string \"coeff\"");
        Rational c;
        try {
            c = Rational(t.at("coeff").get<std::string>(), 10);
        } catch (std::exception const&) {
            bad("coeff is not a rational p/q");
        }
        if (c.get_den() == 0)
            bad("coeff has a zero denominator");
        c.canonicalize();
        Expr term(c);
        if (t.contains("atoms")) {
            if (!t.at("atoms").is_array())
                bad("atoms must be an array");
            for (auto const& a : t.at("atoms"))
                term *= atom_from_json(a, b);
        }
        out += term;
    }
    return out;
}

} // namespace detail

std::string print_json(Expr const& e, BundleSpec const& bundle)
{
    nlohmann::ordered_json out;
    out["schema"] = 1;
    out["terms"] = detail::expr_to_json(e, bundle)["terms"];
    return out.dump();
}

Expr parse_json(std::string_view text, BundleSpec const& bundle)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (nlohmann::json::parse_error const& e) {
        throw ParseError(std::string("json: ") + e.what(), 1, static_cast<int>(e.byte));
    }
    if (!j.is_object() || !j.contains("schema") || j.at("schema") != 1)
        throw ParseError("json: expected \"schema\": 1", 1, 1);
    try {
        return detail::expr_from_json(j, bundle);
    } catch (nlohmann::json::exception const& e) {
        throw ParseError(std::string("json: ") + e.what(), 1, 1);
    }
}

} // namespace jetvar
