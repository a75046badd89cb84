#include "jetvar/bundle.hpp"

#include <algorithm>
#include <set>

#include "jetvar/error.hpp"

namespace jetvar {

BundleSpec::BundleSpec(std::vector<std::string> base, std::vector<std::string> fields,
                       std::vector<std::string> params, int max_order)
    : base_(std::move(base)), fields_(std::move(fields)), params_(std::move(params)), max_order_(max_order)
{
    if (base_.empty())
        throw Error("a bundle needs at least one base coordinate");
    if (fields_.empty())
        throw Error("a bundle needs at least one field");
    if (max_order_ < 0)
        throw Error("negative jet order");
    std::set<std::string> seen;
    for (auto const* names : {&base_, &fields_, &params_})
        for (auto const& n : *names)
            if (!seen.insert(n).second)
                throw Error("name declared twice: " + n);
}

namespace {

std::optional<int> find(std::vector<std::string> const& names, std::string const& name)
{
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end())
        return std::nullopt;
    return static_cast<int>(it - names.begin());
}

} // namespace

std::optional<int> BundleSpec::base_index(std::string const& name) const
{
    return find(base_, name);
}

std::optional<int> BundleSpec::field_index(std::string const& name) const
{
    return find(fields_, name);
}

bool BundleSpec::has_param(std::string const& name) const
{
    return find(params_, name).has_value();
}

bool BundleSpec::declares(std::string const& name) const
{
    return base_index(name) || field_index(name) || has_param(name);
}

BundleSpec BundleSpec::extended(std::vector<std::string> const& new_fields) const
{
    auto fields = fields_;
    fields.insert(fields.end(), new_fields.begin(), new_fields.end());
    return BundleSpec(base_, std::move(fields), params_, max_order_);
}

BundleSpec BundleSpec::with_params(std::vector<std::string> const& new_params) const
{
    auto params = params_;
    for (auto const& p : new_params)
        if (!has_param(p))
            params.push_back(p);
    return BundleSpec(base_, fields_, std::move(params), max_order_);
}

BundleSpec BundleSpec::grown_to(int order) const
{
    BundleSpec copy = *this;
    copy.max_order_ = std::max(max_order_, order);
    return copy;
}

std::string BundleSpec::fresh_name(std::string const& stem) const
{
    if (!declares(stem))
        return stem;
    for (int k = 1;; ++k) {
        std::string candidate = stem + std::to_string(k);
        if (!declares(candidate))
            return candidate;
    }
}

Expr BundleSpec::coordinate(std::string const& name) const
{
    auto i = base_index(name);
    if (!i)
        throw Error("undeclared base coordinate: " + name);
    return Expr::coordinate(*i);
}

Expr BundleSpec::field(std::string const& name, MultiIndex const& alpha) const
{
    auto i = field_index(name);
    if (!i)
        throw Error("undeclared field: " + name);
    if (alpha.size() != dimension())
        throw Error("multi-index length does not match the base dimension");
    return Expr::jet(*i, alpha);
}

} // namespace jetvar
