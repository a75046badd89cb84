#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "jetvar/cli.hpp"
#include "jetvar/dsl.hpp"
#include "jetvar/error.hpp"
#include "jetvar/variational.hpp"
#include "detail.hpp"
#include "json_expr.hpp"

namespace jetvar::cli {

namespace {

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct Component
{
    std::string label;
    Expr value;
};

std::string read_input(std::string const& path, std::istream& in)
{
    std::ostringstream buf;
    if (path == "-") {
        buf << in.rdbuf();
        return buf.str();
    }
    std::ifstream file(path, std::ios::binary);
    if (!file)
        throw UsageError("cannot open '" + path + "'");
    buf << file.rdbuf();
    return buf.str();
}

template <typename T>
T const& select(std::vector<T> const& decls, std::optional<std::string> const& name, char const* kind,
                char const* flag)
{
    if (name) {
        for (auto const& d : decls)
            if (d.name == *name)
                return d;
        throw UsageError(std::string("no ") + kind + " named '" + *name + "'");
    }
    if (decls.empty())
        throw UsageError(std::string("the theory declares no ") + kind);
    if (decls.size() > 1)
        throw UsageError(std::string("several ") + kind + "s declared; choose one with " + flag);
    return decls.front();
}

std::string jet_label(BundleSpec const& b, int field, MultiIndex const& alpha)
{
    return print_expr(Expr::jet(field, alpha), b);
}

class Session
{
public:
    Session(Command const& cmd, TheoryFile theory, std::ostream& out, std::ostream& err)
        : cmd_(cmd), t_(std::move(theory)), out_(out), err_(err)
    {}

    int dispatch()
    {
        std::string const& s = cmd_.subcommand;
        if (s == "el")
            return el();
        if (s == "momentum")
            return momentum_cmd();
        if (s == "noether")
            return noether();
        if (s == "helmholtz")
            return helmholtz();
        if (s == "jacobi")
            return jacobi_cmd(false);
        if (s == "second-variation")
            return jacobi_cmd(true);
        if (s == "bianchi")
            return bianchi_cmd();
        if (s == "superpotential")
            return superpotential_cmd();
        if (s == "check")
            return check();
        throw UsageError("unknown subcommand '" + s + "'");
    }

private:
    Expr const& lagrangian()
    {
        Expr const& l = select(t_.lagrangians, cmd_.lagrangian, "lagrangian", "--lagrangian").density;
        int order = l.max_order();
        if (order > cmd_.max_order)
            throw UnsupportedOrder("lagrangian of order " + std::to_string(order) + " exceeds the supported " +
                                   std::to_string(cmd_.max_order) + " (set JETVAR_MAX_ORDER to raise it)");
        return l;
    }

    std::vector<int> fields()
    {
        if (!cmd_.field)
            return detail::all_fields(t_.bundle);
        auto f = t_.bundle.field_index(*cmd_.field);
        if (!f)
            throw UsageError("no field named '" + *cmd_.field + "'");
        return {*f};
    }

    GaugeGenerator gauge()
    {
        return select(t_.gauges, cmd_.gauge, "gauge", "--gauge").generator(t_.bundle);
    }

    void emit(std::vector<Component> const& parts, BundleSpec const& b)
    {
        if (cmd_.format == "json") {
            if (parts.size() == 1) {
                out_ << print_json(parts[0].value, b) << "\n";
                return;
            }
            nlohmann::ordered_json j;
            j["schema"] = 1;
            auto arr = nlohmann::ordered_json::array();
            for (auto const& p : parts) {
                nlohmann::ordered_json c;
                c["label"] = p.label;
                c["terms"] = detail::expr_to_json(p.value, b)["terms"];
                arr.push_back(std::move(c));
            }
            j["components"] = std::move(arr);
            out_ << j.dump() << "\n";
            return;
        }
        bool latex = cmd_.format == "latex";
        for (auto const& p : parts) {
            std::string text = latex ? print_latex(p.value, b) : print_expr(p.value, b);
            if (parts.size() == 1)
                out_ << text << "\n";
            else
                out_ << p.label << ": " << text << "\n";
        }
    }

    int verdict(bool ok, std::string const& what)
    {
        if (!cmd_.verify || ok)
            return kExitOk;
        err_ << "jetvar: verification failed: " << what << "\n";
        return kExitFailure;
    }

    std::vector<Component> source_components(SourceForm const& s, BundleSpec const& b)
    {
        std::vector<Component> parts;
        for (std::size_t k = 0; k < s.fields.size(); ++k)
            parts.push_back({b.fields()[static_cast<std::size_t>(s.fields[k])], s.components[k]});
        return parts;
    }

    // ---- identities shared by --verify and check

    bool first_variation_holds(Expr const& l)
    {
        AuxiliaryFields aux = auxiliary_fields(t_.bundle, "zeta");
        return first_variation_residual(l, aux.variation(), aux.bundle).is_zero();
    }

    bool helmholtz_of_el_holds(Expr const& l)
    {
        return is_locally_variational(euler_lagrange(l, t_.bundle), t_.bundle);
    }

    /// 1/2 E_zeta(second variation) against the Jacobi form, field by field.
    bool comparison_holds(Expr const& l, AuxiliaryFields const& aux)
    {
        EvolutionaryField v = aux.variation();
        std::size_t n = t_.bundle.dimension();
        Expr d2 = detail::top_coefficient(second_variation(l, v, aux.bundle), n);
        SourceForm half = euler_lagrange(d2, aux.bundle, aux.aux);
        SourceForm j = jacobi(l, v, aux.bundle);
        for (std::size_t k = 0; k < aux.fields.size(); ++k)
            if (!(Expr(Rational(1, 2)) * half.components[k] == j.component_for(aux.fields[k])))
                return false;
        return true;
    }

    // ---- subcommands

    int el()
    {
        Expr const& l = lagrangian();
        SourceForm e = euler_lagrange(l, t_.bundle, fields());
        emit(source_components(e, t_.bundle), t_.bundle);
        bool ok = !cmd_.verify || (helmholtz_of_el_holds(l) && first_variation_holds(l));
        return verdict(ok, "first variation / Helmholtz identity");
    }

    int momentum_cmd()
    {
        Expr const& l = lagrangian();
        Momentum p = momentum(l, t_.bundle, fields(), cmd_.max_order);
        std::vector<Component> parts;
        for (auto const& [key, c] : p.components) {
            auto const& [field, alpha, sigma] = key;
            parts.push_back({jet_label(t_.bundle, field, alpha) + "," + t_.bundle.base()[static_cast<std::size_t>(sigma)],
                             c});
        }
        if (parts.empty())
            parts.push_back({"", Expr()});
        emit(parts, t_.bundle);
        bool ok = !cmd_.verify || first_variation_holds(l);
        return verdict(ok, "first variation identity");
    }

    int noether()
    {
        Expr const& l = lagrangian();
        ProjectableVectorField const& u = select(t_.vfields, cmd_.vfield, "vfield", "--vfield").field;
        NoetherCurrent eps = noether_current(l, u, t_.bundle);
        std::vector<Component> parts;
        for (std::size_t s = 0; s < eps.components.size(); ++s)
            parts.push_back({t_.bundle.base()[s], eps.components[s]});
        emit(parts, t_.bundle);
        bool ok = true;
        if (cmd_.verify)
            ok = on_shell_divergence(l, eps, ProlongedField::of(u, t_.bundle), t_.bundle).is_zero();
        return verdict(ok, "current is not conserved on shell");
    }

    int helmholtz()
    {
        SourceForm s;
        if (cmd_.source || t_.lagrangians.empty())
            s = select(t_.sources, cmd_.source, "source", "--source").form();
        else
            s = euler_lagrange(lagrangian(), t_.bundle);
        std::vector<Component> parts;
        for (auto const& h : helmholtz_residuals(s, t_.bundle)) {
            if (h.value.is_zero())
                continue;
            parts.push_back({t_.bundle.fields()[static_cast<std::size_t>(h.i)] + "," + jet_label(t_.bundle, h.j, h.alpha),
                             h.value});
        }
        bool ok = parts.empty();
        if (parts.empty())
            parts.push_back({"", Expr()});
        emit(parts, t_.bundle);
        return verdict(ok, "source form is not locally variational");
    }

    int jacobi_cmd(bool second)
    {
        Expr const& l = lagrangian();
        AuxiliaryFields aux = auxiliary_fields(t_.bundle, fields(), "zeta");
        if (second) {
            Expr d2 = detail::top_coefficient(second_variation(l, aux.variation(), aux.bundle), t_.bundle.dimension());
            emit({{"", d2}}, aux.bundle);
        } else {
            emit(source_components(jacobi(l, aux.variation(), aux.bundle), aux.bundle), aux.bundle);
        }
        bool ok = !cmd_.verify || comparison_holds(l, aux);
        return verdict(ok, "second variation does not match the Jacobi form");
    }

    int bianchi_cmd()
    {
        Expr const& l = lagrangian();
        GaugeGenerator g = gauge();
        SourceForm b = bianchi(l, g);
        emit(source_components(b, g.bundle()), g.bundle());
        bool ok = !cmd_.verify || b.is_zero() == kernel_check(l, g.variation(), g.bundle());
        return verdict(ok, "Bianchi morphism and Jacobi kernel disagree");
    }

    int superpotential_cmd()
    {
        Expr const& l = lagrangian();
        GaugeGenerator g = gauge();
        BundleSpec const& b = g.bundle();
        // report the obstruction in theory names before the library does it with generic ones
        SourceForm beta = bianchi(l, g);
        if (!beta.is_zero()) {
            std::string parts;
            for (auto const& c : source_components(beta, b))
                if (!c.value.is_zero())
                    parts += (parts.empty() ? "" : ", ") + c.label + ": " + print_expr(c.value, b);
            throw BianchiObstruction("the Bergmann-Bianchi morphism does not vanish (" + parts +
                                     "); the generator is not a gauge symmetry");
        }
        Superpotential nu = superpotential(l, g);
        std::vector<Component> parts;
        for (auto const& [key, c] : nu.upper)
            parts.push_back({b.base()[static_cast<std::size_t>(key.first)] + "," +
                                 b.base()[static_cast<std::size_t>(key.second)],
                             c});
        if (parts.empty())
            parts.push_back({"", Expr()});
        emit(parts, b);
        bool ok = true;
        if (cmd_.verify) {
            ProlongedField x{std::vector<Expr>(b.dimension()), g.variation()};
            NoetherCurrent target = noether_current(l, x, b) - reduced_current(l, g);
            NoetherCurrent d = nu.divergence();
            for (std::size_t s = 0; s < b.dimension(); ++s)
                ok = ok && d.components[s] == target.components[s];
        }
        return verdict(ok, "divergence of the superpotential differs from eps - eps~");
    }

    int check()
    {
        Expr const& l = lagrangian();
        std::vector<std::pair<std::string, std::string>> rows;
        bool failed = false;
        auto record = [&](std::string name, auto&& test) {
            std::string status;
            try {
                bool ok = test();
                status = ok ? "pass" : "FAIL";
                failed = failed || !ok;
            } catch (BianchiObstruction const&) {
                status = "skip";
            } catch (DegenerateDimension const&) {
                status = "skip";
            } catch (Error const& e) {
                status = std::string("FAIL (") + e.what() + ")";
                failed = true;
            }
            rows.emplace_back(std::move(name), std::move(status));
        };

        record("first-variation identity", [&] { return first_variation_holds(l); });
        record("helmholtz of EL", [&] { return helmholtz_of_el_holds(l); });
        record("second variation = jacobi",
               [&] { return comparison_holds(l, auxiliary_fields(t_.bundle, "zeta")); });
        for (auto const& decl : t_.gauges) {
            GaugeGenerator g = decl.generator(t_.bundle);
            record("bianchi gate [" + decl.name + "]", [&] {
                return bianchi(l, g).is_zero() == kernel_check(l, g.variation(), g.bundle());
            });
            record("strong conservation [" + decl.name + "]", [&] {
                if (!bianchi(l, g).is_zero())
                    throw BianchiObstruction("no gauge symmetry");
                if (g.bundle().dimension() < 2)
                    throw DegenerateDimension("n < 2");
                ProlongedField x{std::vector<Expr>(g.bundle().dimension()), g.variation()};
                NoetherCurrent diff = noether_current(l, x, g.bundle()) - reduced_current(l, g);
                return diff.divergence().is_zero();
            });
        }

        if (cmd_.format == "json") {
            nlohmann::ordered_json j;
            j["schema"] = 1;
            auto arr = nlohmann::ordered_json::array();
            for (auto const& [name, status] : rows)
                arr.push_back({{"check", name}, {"status", status}});
            j["checks"] = std::move(arr);
            out_ << j.dump() << "\n";
        } else {
            for (auto const& [name, status] : rows) {
                std::string padded = name;
                padded.resize(std::max<std::size_t>(name.size() + 2, 32), ' ');
                out_ << padded << status << "\n";
            }
        }
        return failed ? kExitFailure : kExitOk;
    }

    Command const& cmd_;
    TheoryFile t_;
    std::ostream& out_;
    std::ostream& err_;
};

} // namespace

int run(Command const& cmd, std::istream& in, std::ostream& out, std::ostream& err)
{
    try {
        TheoryFile theory = parse(read_input(cmd.input, in));
        return Session(cmd, std::move(theory), out, err).dispatch();
    } catch (UsageError const& e) {
        err << "jetvar: " << e.what() << "\n";
        return kExitUsage;
    } catch (ParseError const& e) {
        err << "jetvar: " << (cmd.input == "-" ? "<stdin>" : cmd.input) << ":" << e.what() << "\n";
        return kExitUsage;
    } catch (BianchiObstruction const& e) {
        err << "jetvar: Bianchi obstruction: " << e.what() << "\n";
        return kExitFailure;
    } catch (NotASymmetry const& e) {
        err << "jetvar: not a symmetry: " << e.what() << "\n";
        return kExitFailure;
    } catch (Error const& e) {
        err << "jetvar: " << e.what() << "\n";
        return kExitFailure;
    }
}

namespace {

/// JETVAR_MAX_ORDER, when set, must be an integer in [1, 12].
int max_order_from_env()
{
    char const* raw = std::getenv("JETVAR_MAX_ORDER");
    if (!raw)
        return kMaxLagrangianOrder;
    std::string_view s(raw);
    int value = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || end != s.data() + s.size() || value < 1 || value > 12)
        throw UsageError("JETVAR_MAX_ORDER must be an integer between 1 and 12");
    return value;
}

} // namespace

int main(int argc, char const* const* argv, std::istream& in, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Symbolic variational calculus on jet bundles", "jetvar"};
    Command cmd;
    app.add_option("command", cmd.subcommand, "el | momentum | noether | helmholtz | jacobi | bianchi | "
                                              "superpotential | check | second-variation")
        ->required()
        ->check(CLI::IsMember({"el", "momentum", "noether", "helmholtz", "jacobi", "bianchi", "superpotential",
                               "check", "second-variation"}));
    app.add_option("input", cmd.input, "theory file (.jvt), or - for stdin")->required();
    app.add_option("--format", cmd.format, "output format")->check(CLI::IsMember({"text", "latex", "json"}));
    app.add_option("--lagrangian", cmd.lagrangian, "lagrangian to use");
    app.add_option("--field", cmd.field, "restrict to one field");
    app.add_option("--vfield", cmd.vfield, "vector field for noether");
    app.add_option("--gauge", cmd.gauge, "gauge generator");
    app.add_option("--source", cmd.source, "source form for helmholtz");
    app.add_flag("--verify", cmd.verify, "check the identity behind the result; exit 2 on failure");

    try {
        app.parse(argc, argv);
    } catch (CLI::CallForHelp const&) {
        out << app.help();
        return kExitOk;
    } catch (CLI::ParseError const& e) {
        err << "jetvar: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }
    try {
        cmd.max_order = max_order_from_env();
    } catch (UsageError const& e) {
        err << "jetvar: " << e.what() << "\n";
        return kExitUsage;
    }
    return run(cmd, in, out, err);
}

} // namespace jetvar::cli
