#include "jetvar/jet.hpp"

#include "jetvar/error.hpp"

namespace jetvar {

Expr total_derivative(Expr const& e, int sigma)
{
    return apply_derivation(e, [sigma](Atom const& a) -> Expr {
        switch (a.kind) {
        case Atom::Kind::base:
            return a.index == sigma ? Expr(1) : Expr();
        case Atom::Kind::jet:
            return Expr::jet(a.index, a.mi.raised(static_cast<std::size_t>(sigma)));
        case Atom::Kind::param:
            break;
        }
        return Expr();
    });
}

Expr total_derivative(Expr const& e, MultiIndex const& alpha)
{
    Expr result = e;
    for (std::size_t sigma = 0; sigma < alpha.size(); ++sigma)
        for (int k = 0; k < alpha[sigma]; ++k)
            result = total_derivative(result, static_cast<int>(sigma));
    return result;
}

ProjectableVectorField ProjectableVectorField::zero(BundleSpec const& bundle)
{
    return {std::vector<Expr>(bundle.dimension()), std::vector<Expr>(bundle.field_count())};
}

ProjectableVectorField ProjectableVectorField::translation(BundleSpec const& bundle, int sigma)
{
    auto u = zero(bundle);
    u.base.at(static_cast<std::size_t>(sigma)) = Expr(1);
    return u;
}

void ProjectableVectorField::check_projectable() const
{
    for (auto const& xi : base)
        if (xi.depends_on([](Atom const& a) { return a.is_jet(); }))
            throw PreconditionError("base component of a projectable field depends on jet coordinates: " +
                                    xi.debug_string());
}

bool ProjectableVectorField::is_zero() const
{
    for (auto const& c : base)
        if (!c.is_zero())
            return false;
    for (auto const& c : fiber)
        if (!c.is_zero())
            return false;
    return true;
}

bool EvolutionaryField::is_zero() const
{
    for (auto const& c : components)
        if (!c.is_zero())
            return false;
    return true;
}

SplitField split(ProjectableVectorField const& u, BundleSpec const& bundle)
{
    u.check_projectable();
    SplitField out;
    out.horizontal = u.base;
    out.horizontal.resize(bundle.dimension());
    out.vertical.components.resize(u.fiber.size());
    for (std::size_t i = 0; i < u.fiber.size(); ++i) {
        Expr v = u.fiber[i];
        for (std::size_t g = 0; g < bundle.dimension(); ++g)
            if (!out.horizontal[g].is_zero())
                v -= Expr::jet(static_cast<int>(i), bundle.unit(static_cast<int>(g))) * out.horizontal[g];
        out.vertical.components[i] = std::move(v);
    }
    return out;
}

JetComponents evolutionary_prolong(EvolutionaryField const& v, BundleSpec const& bundle, int order)
{
    JetComponents out;
    for (std::size_t i = 0; i < v.components.size(); ++i) {
        // walk the multi-indices in graded order so each D_alpha v reuses a lower one
        std::map<MultiIndex, Expr> by_index;
        for (auto const& alpha : multi_indices_up_to(bundle.dimension(), order)) {
            Expr value;
            if (alpha.is_zero()) {
                value = v.components[i];
            } else {
                std::size_t sigma = 0;
                while (alpha[sigma] == 0)
                    ++sigma;
                value = total_derivative(by_index.at(alpha - MultiIndex::unit(alpha.size(), sigma)),
                                         static_cast<int>(sigma));
            }
            by_index.emplace(alpha, value);
            out.emplace(Atom::jet(static_cast<int>(i), alpha), std::move(value));
        }
    }
    return out;
}

JetComponents prolong(ProjectableVectorField const& u, BundleSpec const& bundle, int order)
{
    SplitField parts = split(u, bundle);
    JetComponents out = evolutionary_prolong(parts.vertical, bundle, order);
    for (auto& [atom, value] : out)
        for (std::size_t g = 0; g < bundle.dimension(); ++g)
            if (!parts.horizontal[g].is_zero())
                value += Expr::jet(atom.index, atom.mi.raised(g)) * parts.horizontal[g];
    return out;
}

ProlongedField ProlongedField::of(ProjectableVectorField const& u, BundleSpec const& bundle)
{
    SplitField parts = split(u, bundle);
    return ProlongedField{std::move(parts.horizontal), std::move(parts.vertical)};
}

ProlongedField ProlongedField::coordinate(std::size_t dimension, int sigma)
{
    ProlongedField x;
    x.horizontal.resize(dimension);
    x.horizontal.at(static_cast<std::size_t>(sigma)) = Expr(1);
    return x;
}

Expr ProlongedField::vertical_component(int field, MultiIndex const& alpha) const
{
    Expr v = vertical.component(static_cast<std::size_t>(field));
    if (v.is_zero())
        return v;
    return total_derivative(v, alpha);
}

Expr ProlongedField::apply(Expr const& f) const
{
    return apply_derivation(f, [this](Atom const& a) -> Expr {
        switch (a.kind) {
        case Atom::Kind::base:
            return horizontal_component(a.index);
        case Atom::Kind::jet: {
            Expr value = vertical_component(a.index, a.mi);
            for (std::size_t g = 0; g < horizontal.size(); ++g)
                if (!horizontal[g].is_zero())
                    value += Expr::jet(a.index, a.mi.raised(g)) * horizontal[g];
            return value;
        }
        case Atom::Kind::param:
            break;
        }
        return Expr();
    });
}

} // namespace jetvar
