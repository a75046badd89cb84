#pragma once

#include <json.hpp>

#include "jetvar/bundle.hpp"
#include "jetvar/expr.hpp"

namespace jetvar::detail {

/// {"terms":[...]} without the schema tag; the CLI nests these under "components".
nlohmann::ordered_json expr_to_json(Expr const& e, BundleSpec const& bundle);
Expr expr_from_json(nlohmann::json const& j, BundleSpec const& bundle);

} // namespace jetvar::detail
