#include "jetvar/variational.hpp"

#include <algorithm>

#include "jetvar/error.hpp"
#include "jetvar/ibp.hpp"
#include "detail.hpp"

namespace jetvar {

namespace detail {

void check_bundle(Expr const& e, BundleSpec const& bundle)
{
    int const n = static_cast<int>(bundle.dimension());
    if (e.dimension() != 0 && e.dimension() != n)
        throw IncompatibleBundle("expression has jets of base dimension " + std::to_string(e.dimension()) +
                                 ", bundle has " + std::to_string(n));
    e.for_each_atom([&](Atom const& a) {
        if (a.is_jet() && (a.index < 0 || static_cast<std::size_t>(a.index) >= bundle.field_count()))
            throw IncompatibleBundle("expression refers to field #" + std::to_string(a.index) +
                                     " outside the bundle");
        if (a.is_base() && a.index >= n)
            throw IncompatibleBundle("expression refers to base coordinate #" + std::to_string(a.index) +
                                     " outside the bundle");
    });
}

std::vector<int> all_fields(BundleSpec const& bundle)
{
    std::vector<int> out(bundle.field_count());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<int>(i);
    return out;
}

std::vector<int> leading_fields(std::size_t count)
{
    std::vector<int> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = static_cast<int>(i);
    return out;
}

Expr top_coefficient(DiffForm const& form, std::size_t dimension)
{
    if (form.is_zero())
        return Expr();
    DiffForm vol = DiffForm::volume(dimension);
    return form.coefficient(vol.terms().begin()->first);
}

} // namespace detail

using detail::check_bundle;

bool SourceForm::is_zero() const
{
    return std::all_of(components.begin(), components.end(), [](Expr const& e) { return e.is_zero(); });
}

Expr SourceForm::component_for(int field) const
{
    for (std::size_t k = 0; k < fields.size(); ++k)
        if (fields[k] == field)
            return components[k];
    return Expr();
}

DiffForm SourceForm::to_form(std::size_t dimension) const
{
    DiffForm out(static_cast<int>(dimension) + 1);
    DiffForm vol = DiffForm::volume(dimension);
    for (std::size_t k = 0; k < fields.size(); ++k)
        if (!components[k].is_zero())
            out += components[k] * wedge(DiffForm::theta(fields[k], MultiIndex(dimension)), vol);
    return out;
}

SourceForm euler_lagrange(Expr const& lambda, BundleSpec const& bundle)
{
    return euler_lagrange(lambda, bundle, detail::all_fields(bundle));
}

SourceForm euler_lagrange(Expr const& lambda, BundleSpec const& bundle, std::vector<int> const& fields)
{
    check_bundle(lambda, bundle);
    SourceForm out;
    out.fields = fields;
    auto atoms = lambda.atoms();
    for (int field : fields) {
        Expr e;
        for (Atom const& a : atoms) {
            if (!a.is_jet() || a.index != field)
                continue;
            Expr d = total_derivative(partial(lambda, a), a.mi);
            if (a.mi.order() % 2 == 0)
                e += d;
            else
                e -= d;
        }
        out.components.push_back(std::move(e));
    }
    return out;
}

bool is_variationally_trivial(Expr const& lambda, BundleSpec const& bundle)
{
    return euler_lagrange(lambda, bundle).is_zero();
}

Expr Momentum::component(int field, MultiIndex const& alpha, int sigma) const
{
    auto it = components.find({field, alpha, sigma});
    return it == components.end() ? Expr() : it->second;
}

DiffForm Momentum::to_form() const
{
    DiffForm out(static_cast<int>(dimension));
    for (auto const& [key, c] : components) {
        auto const& [field, alpha, sigma] = key;
        out += c * wedge(DiffForm::theta(field, alpha), DiffForm::volume_dual(dimension, sigma));
    }
    return out;
}

std::vector<Expr> Momentum::contract(EvolutionaryField const& v) const
{
    std::vector<Expr> out(dimension);
    for (auto const& [key, c] : components) {
        auto const& [field, alpha, sigma] = key;
        Expr vi = v.component(static_cast<std::size_t>(field));
        if (!vi.is_zero())
            out[static_cast<std::size_t>(sigma)] += c * total_derivative(vi, alpha);
    }
    return out;
}

Momentum momentum(Expr const& lambda, BundleSpec const& bundle, int max_order)
{
    return momentum(lambda, bundle, detail::all_fields(bundle), max_order);
}

Momentum momentum(Expr const& lambda, BundleSpec const& bundle, std::vector<int> const& fields, int max_order)
{
    check_bundle(lambda, bundle);
    int order = lambda.max_order();
    if (order > max_order)
        throw UnsupportedOrder("Lagrangian of order " + std::to_string(order) +
                               " exceeds the supported integration-by-parts depth " + std::to_string(max_order));

    LinearJetCoefficients coeffs;
    for (Atom const& a : lambda.atoms())
        if (a.is_jet() && a.order() > 0 && std::find(fields.begin(), fields.end(), a.index) != fields.end())
            coeffs[{a.index, a.mi}] = partial(lambda, a);

    IntegrationByParts ibp = integrate_by_parts(std::move(coeffs), bundle.dimension());
    Momentum out;
    out.dimension = bundle.dimension();
    for (std::size_t sigma = 0; sigma < ibp.flux.size(); ++sigma)
        for (auto const& [key, c] : ibp.flux[sigma])
            out.components.emplace(std::make_tuple(key.first, key.second, static_cast<int>(sigma)), c);
    return out;
}

DiffForm first_variation_residual(Expr const& lambda, EvolutionaryField const& v, BundleSpec const& bundle)
{
    std::size_t n = bundle.dimension();
    ProlongedField x = ProlongedField::of(v);
    DiffForm lag = lambda * DiffForm::volume(n);
    DiffForm source = euler_lagrange(lambda, bundle).to_form(n);
    DiffForm p = momentum(lambda, bundle).to_form();

    DiffForm out = lie_derivative_form(x, lag, n);
    out -= interior(x, source);
    if (!p.is_zero())
        out -= d_H(interior(x, p), n);
    return out;
}

std::vector<HelmholtzResidual> helmholtz_residuals(SourceForm const& source, BundleSpec const& bundle)
{
    std::size_t n = bundle.dimension();
    int q = 0;
    for (auto const& e : source.components) {
        check_bundle(e, bundle);
        q = std::max(q, e.max_order());
    }
    auto indices = multi_indices_up_to(n, q);

    std::vector<HelmholtzResidual> out;
    for (std::size_t ki = 0; ki < source.fields.size(); ++ki) {
        int i = source.fields[ki];
        Expr const& Ei = source.components[ki];
        for (std::size_t kj = 0; kj < source.fields.size(); ++kj) {
            int j = source.fields[kj];
            Expr const& Ej = source.components[kj];
            for (auto const& alpha : indices) {
                Expr h = partial(Ei, Atom::jet(j, alpha));
                for (auto const& beta : indices) {
                    if (!beta.contains(alpha))
                        continue;
                    Expr d = partial(Ej, Atom::jet(i, beta));
                    if (d.is_zero())
                        continue;
                    MultiIndex rest = beta - alpha;
                    Rational c = mi_multinomial(alpha, rest);
                    if (beta.order() % 2 != 0)
                        c = -c;
                    h -= Expr(c) * total_derivative(d, rest);
                }
                out.push_back(HelmholtzResidual{i, j, alpha, std::move(h)});
            }
        }
    }
    return out;
}

bool is_locally_variational(SourceForm const& source, BundleSpec const& bundle)
{
    auto residuals = helmholtz_residuals(source, bundle);
    return std::all_of(residuals.begin(), residuals.end(), [](auto const& r) { return r.value.is_zero(); });
}

EvolutionaryField AuxiliaryFields::variation() const
{
    EvolutionaryField v;
    for (std::size_t k = 0; k < fields.size(); ++k) {
        auto f = static_cast<std::size_t>(fields[k]);
        if (v.components.size() <= f)
            v.components.resize(f + 1);
        v.components[f] = bundle.field(aux[k]);
    }
    return v;
}

AuxiliaryFields auxiliary_fields(BundleSpec const& bundle, std::vector<int> const& fields, std::string const& stem)
{
    AuxiliaryFields out{bundle, fields, {}};
    for (int f : fields) {
        std::string name = fields.size() == 1 ? stem : stem + bundle.fields().at(static_cast<std::size_t>(f));
        name = out.bundle.fresh_name(name);
        out.bundle = out.bundle.extended({name});
        out.aux.push_back(static_cast<int>(out.bundle.field_count()) - 1);
    }
    return out;
}

AuxiliaryFields auxiliary_fields(BundleSpec const& bundle, std::string const& stem)
{
    return auxiliary_fields(bundle, detail::all_fields(bundle), stem);
}

DiffForm second_variation(Expr const& lambda, EvolutionaryField const& v, BundleSpec const& bundle)
{
    check_bundle(lambda, bundle);
    std::size_t n = bundle.dimension();
    ProlongedField x = ProlongedField::of(v);
    DiffForm once = lie_derivative_form(x, lambda * DiffForm::volume(n), n);
    return lie_derivative_form(x, once, n);
}

SourceForm linearization(SourceForm const& source, EvolutionaryField const& v)
{
    ProlongedField x = ProlongedField::of(v);
    SourceForm out;
    out.fields = source.fields;
    for (auto const& e : source.components)
        out.components.push_back(x.apply(e));
    return out;
}

SourceForm jacobi(Expr const& lambda, EvolutionaryField const& v, BundleSpec const& bundle)
{
    for (auto const& c : v.components)
        check_bundle(c, bundle);
    auto fields = detail::leading_fields(v.components.size());
    return linearization(euler_lagrange(lambda, bundle, fields), v);
}

bool kernel_check(Expr const& lambda, EvolutionaryField const& v, BundleSpec const& bundle)
{
    return jacobi(lambda, v, bundle).is_zero();
}

Expr omega_lagrangian(Expr const& lambda, EvolutionaryField const& v, BundleSpec const& bundle)
{
    auto fields = detail::leading_fields(v.components.size());
    SourceForm e = euler_lagrange(lambda, bundle, fields);
    Expr out;
    for (std::size_t k = 0; k < fields.size(); ++k)
        if (!v.components[k].is_zero())
            out += v.components[k] * e.components[k];
    return out;
}

} // namespace jetvar
