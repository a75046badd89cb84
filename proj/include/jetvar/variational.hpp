#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "jetvar/bundle.hpp"
#include "jetvar/expr.hpp"
#include "jetvar/form.hpp"
#include "jetvar/jet.hpp"

// Lagrangians are plain densities: `lambda` stands for lambda * omega_0 throughout.

namespace jetvar {

/// Deepest Lagrangian order the momentum construction accepts by default.
inline constexpr int kMaxLagrangianOrder = 3;
/// Deepest gauge generator order accepted.
inline constexpr int kMaxGeneratorOrder = 2;

/// sum_i E_i theta^i ^ omega_0; components[k] belongs to bundle field fields[k].
struct SourceForm
{
    std::vector<int> fields;
    std::vector<Expr> components;

    bool is_zero() const;
    /// Component for a bundle field index, zero if the field is not listed.
    Expr component_for(int field) const;
    DiffForm to_form(std::size_t dimension) const;
};

/// E_i = sum_alpha (-1)^|alpha| D_alpha (d lambda / d y^i_alpha) for every field of the bundle.
SourceForm euler_lagrange(Expr const& lambda, BundleSpec const& bundle);
/// Same, restricted to the listed fields.
SourceForm euler_lagrange(Expr const& lambda, BundleSpec const& bundle, std::vector<int> const& fields);

/// Euler-Lagrange form over every field vanishes, i.e. lambda is a total divergence.
bool is_variationally_trivial(Expr const& lambda, BundleSpec const& bundle);

/// p = sum p_i^{alpha,sigma} theta^i_alpha ^ omega_sigma.
struct Momentum
{
    std::size_t dimension = 0;
    /// (field, alpha, sigma) -> coefficient
    std::map<std::tuple<int, MultiIndex, int>, Expr> components;

    bool is_zero() const { return components.empty(); }
    Expr component(int field, MultiIndex const& alpha, int sigma) const;
    DiffForm to_form() const;
    /// (jv _| p)^sigma = sum p_i^{alpha,sigma} D_alpha v^i.
    std::vector<Expr> contract(EvolutionaryField const& v) const;
};

/// Boundary term of the first variation, by integration by parts (highest order first).
/// Throws UnsupportedOrder when lambda has order above `max_order`.
Momentum momentum(Expr const& lambda, BundleSpec const& bundle, int max_order = kMaxLagrangianOrder);
/// Momentum with respect to a subset of fields only.
Momentum momentum(Expr const& lambda, BundleSpec const& bundle, std::vector<int> const& fields,
                  int max_order = kMaxLagrangianOrder);

/// L_{jv}(lambda omega_0) - v _| E - d_H(jv _| p), assembled through the exterior calculus.
DiffForm first_variation_residual(Expr const& lambda, EvolutionaryField const& v, BundleSpec const& bundle);

/// (n-1)-form eps^sigma omega_sigma.
struct NoetherCurrent
{
    std::vector<Expr> components;

    bool is_zero() const;
    DiffForm to_form() const;
    /// D_sigma eps^sigma, the coefficient of d_H eps.
    Expr divergence() const;
};

NoetherCurrent operator-(NoetherCurrent const& a, NoetherCurrent const& b);

enum class SymmetryKind { exact, divergence, none };

struct SymmetryCheck
{
    SymmetryKind kind = SymmetryKind::none;
    /// Coefficient of L_{ju}(lambda omega_0).
    Expr residual;
    /// K^sigma with D_sigma K^sigma = residual (divergence symmetries only).
    std::vector<Expr> potential;
};

SymmetryCheck check_symmetry(Expr const& lambda, ProjectableVectorField const& u, BundleSpec const& bundle);
SymmetryCheck check_symmetry(Expr const& lambda, ProlongedField const& x, BundleSpec const& bundle);

/// Polynomial ansatz for K^sigma with D_sigma K^sigma = f, solved over the rationals.
std::optional<std::vector<Expr>> divergence_potential(Expr const& f, BundleSpec const& bundle, int rounds = 3);

/// eps = -(jv _| p + xi lambda - K), so that d_H eps = v _| E off shell.
/// Throws NotASymmetry (carrying the residual) when u is not a symmetry.
NoetherCurrent noether_current(Expr const& lambda, ProjectableVectorField const& u, BundleSpec const& bundle);
NoetherCurrent noether_current(Expr const& lambda, ProlongedField const& x, BundleSpec const& bundle);

/// d_H eps with every E_i replaced by a fresh symbol which is then set to zero.
/// `x` is the symmetry the current belongs to.
Expr on_shell_divergence(Expr const& lambda, NoetherCurrent const& eps, ProlongedField const& x,
                         BundleSpec const& bundle);

struct HelmholtzResidual
{
    int i = 0; ///< bundle field index
    int j = 0;
    MultiIndex alpha;
    Expr value;
};

/// H_{ij}^alpha = d^alpha_j E_i - sum_{beta >= alpha} (-1)^|beta| C(beta, alpha) D_{beta-alpha} d^beta_i E_j,
/// for all listed fields i, j and |alpha| up to the order of the source form.
std::vector<HelmholtzResidual> helmholtz_residuals(SourceForm const& source, BundleSpec const& bundle);
bool is_locally_variational(SourceForm const& source, BundleSpec const& bundle);

/// A bundle extended by one auxiliary field per listed field, carrying a variation.
struct AuxiliaryFields
{
    BundleSpec bundle;
    std::vector<int> fields; ///< varied fields
    std::vector<int> aux;    ///< aux[k] varies fields[k]

    /// v^{fields[k]} = aux field aux[k]; zero elsewhere.
    EvolutionaryField variation() const;
};

/// Appends auxiliary fields named `stem` (single field) or `stem<field>`.
AuxiliaryFields auxiliary_fields(BundleSpec const& bundle, std::vector<int> const& fields,
                                 std::string const& stem = "zeta");
/// Every field of the bundle varied.
AuxiliaryFields auxiliary_fields(BundleSpec const& bundle, std::string const& stem = "zeta");

/// L_{jv} L_{jv} (lambda omega_0).
DiffForm second_variation(Expr const& lambda, EvolutionaryField const& v, BundleSpec const& bundle);

/// J_i = sum d^alpha_j E_i D_alpha v^j, over the fields the source lists.
SourceForm linearization(SourceForm const& source, EvolutionaryField const& v);

/// Linearised Euler-Lagrange form along jv. The varied fields are 0 .. v.components.size()-1.
SourceForm jacobi(Expr const& lambda, EvolutionaryField const& v, BundleSpec const& bundle);

/// Every component of jacobi(lambda, v) is zero.
bool kernel_check(Expr const& lambda, EvolutionaryField const& v, BundleSpec const& bundle);

/// omega = sum_i v^i E_i(lambda).
Expr omega_lagrangian(Expr const& lambda, EvolutionaryField const& v, BundleSpec const& bundle);

/// Linear differential operator chi -> v^i = sum R^{i alpha}_A D_alpha chi^A.
///
/// Lives on the theory bundle extended by the parameter fields chi^A; the action lists v^i for
/// the theory fields (the leading fields of the bundle).
class GaugeGenerator
{
public:
    /// Throws UnsupportedStructure if an action component is not linear in parameter jets,
    /// UnsupportedOrder beyond kMaxGeneratorOrder.
    GaugeGenerator(BundleSpec bundle, std::vector<int> parameters, std::vector<Expr> action);

    BundleSpec const& bundle() const noexcept { return bundle_; }
    std::vector<int> const& parameters() const noexcept { return parameters_; }
    std::vector<Expr> const& action() const noexcept { return action_; }
    std::size_t theory_fields() const noexcept { return action_.size(); }
    int order() const noexcept { return order_; }
    EvolutionaryField variation() const { return EvolutionaryField{action_}; }

    /// R^{i alpha}_A for theory field i and parameter field A (a bundle index).
    Expr coefficient(int field, int parameter, MultiIndex const& alpha) const;
    bool is_parameter(int field) const;

private:
    BundleSpec bundle_;
    std::vector<int> parameters_;
    std::vector<Expr> action_;
    int order_ = 0;
};

/// beta_A = sum (-1)^|alpha| D_alpha(R^{i alpha}_A E_i).
SourceForm bianchi(Expr const& lambda, GaugeGenerator const& gauge);

/// eps~ with omega = chi^A beta_A + D_sigma eps~^sigma.
NoetherCurrent reduced_current(Expr const& lambda, GaugeGenerator const& gauge);

/// (n-2)-form (1/2) nu^{sigma mu} omega_{sigma mu}, nu antisymmetric.
struct Superpotential
{
    std::size_t dimension = 0;
    std::map<std::pair<int, int>, Expr> upper; ///< sigma < mu

    Expr component(int sigma, int mu) const;
    bool is_zero() const;
    DiffForm to_form() const;
    /// Components D_mu nu^{sigma mu} of d_H nu.
    NoetherCurrent divergence() const;
};

/// nu with d_H nu = eps - eps~, eps the Noether current of xi D + R(chi).
/// Throws DegenerateDimension (n < 2), BianchiObstruction, NotASymmetry, UnsupportedStructure.
Superpotential superpotential(Expr const& lambda, GaugeGenerator const& gauge, std::vector<Expr> const& xi = {});

struct NaturalityResiduals
{
    DiffForm r3; ///< L_{xi D} omega + d_H(jv _| p_omega)
    DiffForm r4; ///< L_{xi D} omega
    /// Residuals vanish in the variational quotient (Euler-Lagrange form zero).
    bool r3_vanishes = false;
    bool r4_vanishes = false;
};

/// Horizontal part from u's base components, vertical part R(chi) on the theory fields.
/// Throws PreconditionError if R(chi) is not in the kernel of the Jacobi morphism.
NaturalityResiduals naturality_residuals(Expr const& lambda, ProjectableVectorField const& u,
                                         GaugeGenerator const& gauge);

/// -(jv _| p_omega); identically divergence free when R(chi) is in the Jacobi kernel.
NoetherCurrent energy_momentum_current(Expr const& lambda, GaugeGenerator const& gauge);

} // namespace jetvar
