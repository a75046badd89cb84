#pragma once

#include <map>
#include <utility>
#include <vector>

#include "jetvar/expr.hpp"

namespace jetvar {

/// (test field, multi-index) -> coefficient of D_alpha t in a linear integrand.
using LinearJetCoefficients = std::map<std::pair<int, MultiIndex>, Expr>;

/// Result of moving every derivative off the test fields:
///   sum c^alpha_t D_alpha t = sum_t remainder[t] * t + D_sigma flux[sigma].
struct IntegrationByParts
{
    std::map<int, Expr> remainder;
    /// flux[sigma] as coefficients of D_beta t.
    std::vector<LinearJetCoefficients> flux;

    /// flux[sigma] as an expression, with `test_jet(t, beta)` standing for D_beta t.
    Expr flux_expr(int sigma) const;
    Expr remainder_of(int test) const;
};

/// Integration by parts, highest order first. Each step peels one derivative along the
/// first base slot with a nonzero entry:
///   c D_alpha t = D_sigma(c D_{alpha-sigma} t) - D_sigma(c) D_{alpha-sigma} t.
IntegrationByParts integrate_by_parts(LinearJetCoefficients coefficients, std::size_t dimension);

/// Reads the linear jet coefficients of `e` in the fields selected by `is_test`.
/// Throws UnsupportedStructure when `e` is not linear (and homogeneous) in those jets.
LinearJetCoefficients linear_jet_coefficients(Expr const& e, std::function<bool(int)> const& is_test);

} // namespace jetvar
