#pragma once

#include <map>
#include <vector>

#include "jetvar/bundle.hpp"
#include "jetvar/expr.hpp"

namespace jetvar {

/// D_sigma e = d e/d x^sigma + sum y^j_{alpha+sigma} d e/d y^j_alpha.
Expr total_derivative(Expr const& e, int sigma);

/// D_alpha e, iterated; independent of the iteration order.
Expr total_derivative(Expr const& e, MultiIndex const& alpha);

/// A vector field on Y covering a base field: base components xi^sigma (no jets),
/// fiber components Xi^i.
struct ProjectableVectorField
{
    std::vector<Expr> base;
    std::vector<Expr> fiber;

    static ProjectableVectorField zero(BundleSpec const& bundle);
    static ProjectableVectorField translation(BundleSpec const& bundle, int sigma);

    /// Throws PreconditionError if a base component contains a jet atom.
    void check_projectable() const;
    bool is_zero() const;
};

/// Vertical generalized field v^i (the characteristic of a variation).
struct EvolutionaryField
{
    std::vector<Expr> components;

    static EvolutionaryField zero(std::size_t fields) { return {std::vector<Expr>(fields)}; }
    Expr component(std::size_t field) const
    {
        return field < components.size() ? components[field] : Expr();
    }
    bool is_zero() const;
};

/// Components of a field on jet space, keyed by the jet atom they act on.
using JetComponents = std::map<Atom, Expr>;

/// Prolongation Xi^i_alpha = D_alpha(Xi^i - y^i_gamma xi^gamma) + y^i_{alpha+gamma} xi^gamma, |alpha| <= order.
JetComponents prolong(ProjectableVectorField const& u, BundleSpec const& bundle, int order);

/// v^i_alpha = D_alpha v^i for |alpha| <= order.
JetComponents evolutionary_prolong(EvolutionaryField const& v, BundleSpec const& bundle, int order);

struct SplitField
{
    std::vector<Expr> horizontal; ///< xi^gamma, acting as xi^gamma D_gamma
    EvolutionaryField vertical;   ///< Xi^i - y^i_gamma xi^gamma
};

SplitField split(ProjectableVectorField const& u, BundleSpec const& bundle);

/// The infinite prolongation of xi^sigma D_sigma + v: the only kind of field the
/// exterior calculus contracts with. dx^sigma(X) = xi^sigma, theta^i_alpha(X) = D_alpha v^i.
struct ProlongedField
{
    std::vector<Expr> horizontal;
    EvolutionaryField vertical;

    static ProlongedField of(ProjectableVectorField const& u, BundleSpec const& bundle);
    static ProlongedField of(EvolutionaryField v) { return ProlongedField{{}, std::move(v)}; }
    static ProlongedField coordinate(std::size_t dimension, int sigma);

    Expr horizontal_component(int sigma) const
    {
        return static_cast<std::size_t>(sigma) < horizontal.size() ? horizontal[static_cast<std::size_t>(sigma)]
                                                                     : Expr();
    }
    Expr vertical_component(int field, MultiIndex const& alpha) const;

    /// X(f) = xi^sigma D_sigma f + D_alpha v^i d f / d y^i_alpha.
    Expr apply(Expr const& f) const;
};

} // namespace jetvar
