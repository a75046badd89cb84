#include <algorithm>

#include "jetvar/error.hpp"
#include "jetvar/ibp.hpp"
#include "jetvar/variational.hpp"
#include "detail.hpp"

namespace jetvar {

GaugeGenerator::GaugeGenerator(BundleSpec bundle, std::vector<int> parameters, std::vector<Expr> action)
    : bundle_(std::move(bundle)), parameters_(std::move(parameters)), action_(std::move(action))
{
    if (action_.size() > bundle_.field_count())
        throw PreconditionError("gauge generator acts on more fields than the bundle has");
    for (int a : parameters_)
        if (a < static_cast<int>(action_.size()) || static_cast<std::size_t>(a) >= bundle_.field_count())
            throw PreconditionError("gauge parameters must be fields appended after the theory fields");

    for (auto const& v : action_) {
        detail::check_bundle(v, bundle_);
        try {
            linear_coefficients(v, [&](Atom const& a) { return a.is_jet() && is_parameter(a.index); });
        } catch (UnsupportedStructure const&) {
            throw UnsupportedStructure("gauge action is not linear in the parameter jets: " + v.debug_string());
        }
        v.for_each_atom([&](Atom const& a) {
            if (a.is_jet() && is_parameter(a.index))
                order_ = std::max(order_, a.order());
        });
    }
    if (order_ > kMaxGeneratorOrder)
        throw UnsupportedOrder("gauge generator of order " + std::to_string(order_) + " exceeds the supported " +
                               std::to_string(kMaxGeneratorOrder));
}

bool GaugeGenerator::is_parameter(int field) const
{
    return std::find(parameters_.begin(), parameters_.end(), field) != parameters_.end();
}

Expr GaugeGenerator::coefficient(int field, int parameter, MultiIndex const& alpha) const
{
    if (field < 0 || static_cast<std::size_t>(field) >= action_.size())
        return Expr();
    return partial(action_[static_cast<std::size_t>(field)], Atom::jet(parameter, alpha));
}

SourceForm bianchi(Expr const& lambda, GaugeGenerator const& gauge)
{
    BundleSpec const& bundle = gauge.bundle();
    auto theory = detail::leading_fields(gauge.theory_fields());
    SourceForm e = euler_lagrange(lambda, bundle, theory);

    SourceForm out;
    out.fields = gauge.parameters();
    out.components.resize(out.fields.size());
    for (std::size_t i = 0; i < theory.size(); ++i) {
        if (e.components[i].is_zero())
            continue;
        auto coeffs = linear_coefficients(gauge.action()[i],
                                          [&](Atom const& a) { return a.is_jet() && gauge.is_parameter(a.index); });
        for (auto const& [atom, r] : coeffs) {
            auto k = static_cast<std::size_t>(
                std::find(out.fields.begin(), out.fields.end(), atom.index) - out.fields.begin());
            Expr term = total_derivative(r * e.components[i], atom.mi);
            if (atom.order() % 2 == 0)
                out.components[k] += term;
            else
                out.components[k] -= term;
        }
    }
    return out;
}

NoetherCurrent reduced_current(Expr const& lambda, GaugeGenerator const& gauge)
{
    Expr omega = omega_lagrangian(lambda, gauge.variation(), gauge.bundle());
    auto coeffs = linear_jet_coefficients(omega, [&](int f) { return gauge.is_parameter(f); });
    IntegrationByParts ibp = integrate_by_parts(std::move(coeffs), gauge.bundle().dimension());
    NoetherCurrent out;
    for (std::size_t s = 0; s < ibp.flux.size(); ++s)
        out.components.push_back(ibp.flux_expr(static_cast<int>(s)));
    return out;
}

Expr Superpotential::component(int sigma, int mu) const
{
    if (sigma == mu)
        return Expr();
    bool flip = sigma > mu;
    auto it = upper.find(flip ? std::make_pair(mu, sigma) : std::make_pair(sigma, mu));
    if (it == upper.end())
        return Expr();
    return flip ? -it->second : it->second;
}

bool Superpotential::is_zero() const
{
    return std::all_of(upper.begin(), upper.end(), [](auto const& kv) { return kv.second.is_zero(); });
}

DiffForm Superpotential::to_form() const
{
    DiffForm out(static_cast<int>(dimension) - 2);
    for (auto const& [key, c] : upper)
        if (!c.is_zero())
            out += c * DiffForm::volume_dual(dimension, key.first, key.second);
    return out;
}

NoetherCurrent Superpotential::divergence() const
{
    NoetherCurrent out;
    out.components.resize(dimension);
    for (std::size_t s = 0; s < dimension; ++s)
        for (std::size_t m = 0; m < dimension; ++m)
            if (s != m)
                out.components[s] += total_derivative(component(static_cast<int>(s), static_cast<int>(m)),
                                                      static_cast<int>(m));
    return out;
}

namespace {

std::string describe(SourceForm const& s)
{
    std::string out;
    for (std::size_t k = 0; k < s.components.size(); ++k)
        if (!s.components[k].is_zero())
            out += (out.empty() ? "" : "; ") + s.components[k].debug_string();
    return out;
}

LinearJetCoefficients parameter_coefficients(Expr const& e, GaugeGenerator const& gauge)
{
    try {
        return linear_jet_coefficients(e, [&](int f) { return gauge.is_parameter(f); });
    } catch (UnsupportedStructure const&) {
        throw UnsupportedStructure("eps - eps~ is not linear in the parameter jets");
    }
}

} // namespace

Superpotential superpotential(Expr const& lambda, GaugeGenerator const& gauge, std::vector<Expr> const& xi)
{
    BundleSpec const& bundle = gauge.bundle();
    std::size_t n = bundle.dimension();
    // the gate comes first: a theory without gauge symmetry is reported as such in any dimension
    SourceForm beta = bianchi(lambda, gauge);
    if (!beta.is_zero())
        throw BianchiObstruction("Bergmann-Bianchi morphism does not vanish: " + describe(beta));
    if (n < 2)
        throw DegenerateDimension("no (n-2)-forms on a base of dimension " + std::to_string(n));

    ProlongedField x{xi, gauge.variation()};
    x.horizontal.resize(n);
    NoetherCurrent eps = noether_current(lambda, x, bundle);
    NoetherCurrent target = eps - reduced_current(lambda, gauge);

    Superpotential nu;
    nu.dimension = n;
    std::vector<Expr> rest = target.components;
    int previous = -1;
    for (;;) {
        std::vector<LinearJetCoefficients> coeffs(n);
        int k = -1;
        for (std::size_t s = 0; s < n; ++s) {
            coeffs[s] = parameter_coefficients(rest[s], gauge);
            for (auto const& [key, c] : coeffs[s])
                k = std::max(k, key.second.order());
        }
        if (k < 0)
            break;
        if (k == 0 || (previous >= 0 && k >= previous))
            throw UnsupportedStructure("eps - eps~ is not divergence free off shell");
        previous = k;

        auto at = [](LinearJetCoefficients const& m, int field, MultiIndex const& a) {
            auto it = m.find({field, a});
            return it == m.end() ? Expr() : it->second;
        };
        std::map<std::pair<int, int>, Expr> step;
        for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t m = s + 1; m < n; ++m) {
                Expr add;
                for (int field : gauge.parameters()) {
                    for (auto const& g : multi_indices_of_order(n, k - 1)) {
                        Expr a = at(coeffs[s], field, g.raised(m));
                        Expr b = at(coeffs[m], field, g.raised(s));
                        if (a.is_zero() && b.is_zero())
                            continue;
                        Expr c = Expr(Rational(g[m] + 1)) * a - Expr(Rational(g[s] + 1)) * b;
                        add += Expr(Rational(1, k + 1)) * c * Expr::jet(field, g);
                    }
                }
                if (!add.is_zero())
                    step[{static_cast<int>(s), static_cast<int>(m)}] = std::move(add);
            }
        }
        Superpotential piece{n, step};
        NoetherCurrent d = piece.divergence();
        for (std::size_t s = 0; s < n; ++s)
            rest[s] -= d.components[s];
        for (auto& [key, c] : step)
            nu.upper[key] += c;
    }
    for (auto it = nu.upper.begin(); it != nu.upper.end();)
        it = it->second.is_zero() ? nu.upper.erase(it) : std::next(it);

    // the contract, checked through the exterior calculus
    if (!(d_H(nu.to_form(), n) == target.to_form()))
        throw Error("superpotential cascade failed to reproduce eps - eps~");
    return nu;
}

namespace {

void require_kernel(Expr const& lambda, GaugeGenerator const& gauge)
{
    if (!kernel_check(lambda, gauge.variation(), gauge.bundle()))
        throw PreconditionError("gauge variation is not in the kernel of the Jacobi morphism");
}

/// jv _| p_omega, v = R(chi) on the theory fields, p over every field of the extended bundle.
NoetherCurrent omega_flux(Expr const& lambda, GaugeGenerator const& gauge)
{
    Expr omega = omega_lagrangian(lambda, gauge.variation(), gauge.bundle());
    // omega is a derived density, twice the Lagrangian order plus the generator order
    Momentum p = momentum(omega, gauge.bundle(), 2 * kMaxLagrangianOrder + kMaxGeneratorOrder);
    return NoetherCurrent{p.contract(gauge.variation())};
}

} // namespace

NaturalityResiduals naturality_residuals(Expr const& lambda, ProjectableVectorField const& u,
                                         GaugeGenerator const& gauge)
{
    require_kernel(lambda, gauge);
    u.check_projectable();
    BundleSpec const& bundle = gauge.bundle();
    std::size_t n = bundle.dimension();

    Expr omega = omega_lagrangian(lambda, gauge.variation(), bundle);
    ProlongedField horizontal{u.base, {}};
    horizontal.horizontal.resize(n);

    NaturalityResiduals out;
    out.r4 = lie_derivative_form(horizontal, omega * DiffForm::volume(n), n);
    out.r3 = out.r4 + d_H(omega_flux(lambda, gauge).to_form(), n);
    out.r3_vanishes = is_variationally_trivial(detail::top_coefficient(out.r3, n), bundle);
    out.r4_vanishes = is_variationally_trivial(detail::top_coefficient(out.r4, n), bundle);
    return out;
}

NoetherCurrent energy_momentum_current(Expr const& lambda, GaugeGenerator const& gauge)
{
    require_kernel(lambda, gauge);
    NoetherCurrent c = omega_flux(lambda, gauge);
    for (auto& e : c.components)
        e = -e;
    return c;
}

} // namespace jetvar
