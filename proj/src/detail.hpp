#pragma once

#include <vector>

#include "jetvar/bundle.hpp"
#include "jetvar/form.hpp"

namespace jetvar::detail {

/// Throws IncompatibleBundle if `e` mentions fields, coordinates or a base dimension the bundle lacks.
void check_bundle(Expr const& e, BundleSpec const& bundle);

std::vector<int> all_fields(BundleSpec const& bundle);
/// 0 .. count-1
std::vector<int> leading_fields(std::size_t count);

/// Coefficient of omega_0 in a top-degree form.
Expr top_coefficient(DiffForm const& form, std::size_t dimension);

} // namespace jetvar::detail
