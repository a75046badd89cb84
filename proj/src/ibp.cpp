#include "jetvar/ibp.hpp"

#include "jetvar/jet.hpp"

namespace jetvar {

Expr IntegrationByParts::flux_expr(int sigma) const
{
    Expr out;
    for (auto const& [key, coeff] : flux.at(static_cast<std::size_t>(sigma)))
        out += coeff * Expr::jet(key.first, key.second);
    return out;
}

Expr IntegrationByParts::remainder_of(int test) const
{
    auto it = remainder.find(test);
    return it == remainder.end() ? Expr() : it->second;
}

namespace {

struct WorkKey
{
    int order;
    int field;
    MultiIndex alpha;

    // highest order first
    std::strong_ordering operator<=>(WorkKey const& other) const
    {
        if (auto c = other.order <=> order; c != 0)
            return c;
        if (auto c = field <=> other.field; c != 0)
            return c;
        return alpha <=> other.alpha;
    }
    bool operator==(WorkKey const& other) const = default;
};

} // namespace

IntegrationByParts integrate_by_parts(LinearJetCoefficients coefficients, std::size_t dimension)
{
    IntegrationByParts out;
    out.flux.resize(dimension);

    std::map<WorkKey, Expr> work;
    for (auto& [key, coeff] : coefficients)
        if (!coeff.is_zero())
            work[WorkKey{key.second.order(), key.first, key.second}] += coeff;

    while (!work.empty()) {
        auto it = work.begin();
        WorkKey key = it->first;
        Expr coeff = std::move(it->second);
        work.erase(it);
        if (coeff.is_zero())
            continue;
        if (key.order == 0) {
            out.remainder[key.field] += coeff;
            continue;
        }
        std::size_t sigma = 0;
        while (key.alpha[sigma] == 0)
            ++sigma;
        MultiIndex lower = key.alpha - MultiIndex::unit(dimension, sigma);
        out.flux[sigma][{key.field, lower}] += coeff;
        Expr moved = total_derivative(coeff, static_cast<int>(sigma));
        if (!moved.is_zero()) {
            auto& slot = work[WorkKey{lower.order(), key.field, lower}];
            slot -= moved;
        }
    }

    for (auto it = out.remainder.begin(); it != out.remainder.end();)
        it = it->second.is_zero() ? out.remainder.erase(it) : std::next(it);
    for (auto& f : out.flux)
        for (auto it = f.begin(); it != f.end();)
            it = it->second.is_zero() ? f.erase(it) : std::next(it);
    return out;
}

LinearJetCoefficients linear_jet_coefficients(Expr const& e, std::function<bool(int)> const& is_test)
{
    auto coeffs = linear_coefficients(e, [&](Atom const& a) { return a.is_jet() && is_test(a.index); });
    LinearJetCoefficients out;
    for (auto& [atom, c] : coeffs)
        out.emplace(std::make_pair(atom.index, atom.mi), std::move(c));
    return out;
}

} // namespace jetvar
