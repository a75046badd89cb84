#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jetvar/expr.hpp"

namespace jetvar {

/// Fibered manifold descriptor: base coordinate names, field names, named constants.
///
/// Fields are referred to by index everywhere else; extending a bundle only appends
/// fields, so expressions over the original bundle remain valid over the extension.
class BundleSpec
{
public:
    BundleSpec() = default;
    BundleSpec(std::vector<std::string> base, std::vector<std::string> fields,
               std::vector<std::string> params = {}, int max_order = 0);

    std::size_t dimension() const noexcept { return base_.size(); }
    std::size_t field_count() const noexcept { return fields_.size(); }
    std::vector<std::string> const& base() const noexcept { return base_; }
    std::vector<std::string> const& fields() const noexcept { return fields_; }
    std::vector<std::string> const& params() const noexcept { return params_; }
    int max_order() const noexcept { return max_order_; }

    std::optional<int> base_index(std::string const& name) const;
    std::optional<int> field_index(std::string const& name) const;
    bool has_param(std::string const& name) const;
    /// True if `name` is already used by a coordinate, field or parameter.
    bool declares(std::string const& name) const;

    /// Appends fields; names must be fresh.
    BundleSpec extended(std::vector<std::string> const& new_fields) const;
    BundleSpec with_params(std::vector<std::string> const& new_params) const;
    /// Jet order grows on demand; returns a copy with max_order >= order.
    BundleSpec grown_to(int order) const;
    /// A name not declared yet, built from `stem` plus a numeric suffix when needed.
    std::string fresh_name(std::string const& stem) const;

    Expr coordinate(std::string const& name) const;
    Expr field(std::string const& name, MultiIndex const& alpha) const;
    Expr field(int index, MultiIndex const& alpha) const { return Expr::jet(index, alpha); }
    Expr field(int index) const { return Expr::jet(index, MultiIndex(dimension())); }
    MultiIndex zero_index() const { return MultiIndex(dimension()); }
    MultiIndex unit(int sigma) const { return MultiIndex::unit(dimension(), static_cast<std::size_t>(sigma)); }

    bool operator==(BundleSpec const& other) const = default;

private:
    std::vector<std::string> base_;
    std::vector<std::string> fields_;
    std::vector<std::string> params_;
    int max_order_ = 0;
};

} // namespace jetvar
