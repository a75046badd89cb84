#include "jetvar/multi_index.hpp"

#include <algorithm>

#include "jetvar/error.hpp"

namespace jetvar {

MultiIndex MultiIndex::unit(std::size_t dimension, std::size_t sigma)
{
    MultiIndex result(dimension);
    result.entries_.at(sigma) = 1;
    return result;
}

int MultiIndex::order() const noexcept
{
    int total = 0;
    for (int e : entries_)
        total += e;
    return total;
}

Rational MultiIndex::factorial() const
{
    mpz_class product = 1;
    for (int e : entries_) {
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(e));
        product *= f;
    }
    return Rational(product);
}

MultiIndex MultiIndex::operator+(MultiIndex const& other) const
{
    if (size() != other.size())
        throw Error("multi-index length mismatch: " + to_string() + " + " + other.to_string());
    MultiIndex result = *this;
    for (std::size_t i = 0; i < size(); ++i)
        result.entries_[i] += other.entries_[i];
    return result;
}

MultiIndex MultiIndex::operator-(MultiIndex const& other) const
{
    if (!contains(other))
        throw Error("multi-index " + other.to_string() + " not contained in " + to_string());
    MultiIndex result = *this;
    for (std::size_t i = 0; i < size(); ++i)
        result.entries_[i] -= other.entries_[i];
    return result;
}

MultiIndex MultiIndex::raised(std::size_t sigma, int by) const
{
    MultiIndex result = *this;
    result.entries_.at(sigma) += by;
    return result;
}

bool MultiIndex::contains(MultiIndex const& other) const
{
    if (size() != other.size())
        return false;
    for (std::size_t i = 0; i < size(); ++i)
        if (entries_[i] < other.entries_[i])
            return false;
    return true;
}

std::strong_ordering MultiIndex::operator<=>(MultiIndex const& other) const
{
    if (auto c = size() <=> other.size(); c != 0)
        return c;
    if (auto c = order() <=> other.order(); c != 0)
        return c;
    for (std::size_t i = 0; i < size(); ++i)
        if (entries_[i] != other.entries_[i])
            return other.entries_[i] <=> entries_[i];
    return std::strong_ordering::equal;
}

std::string MultiIndex::to_string() const
{
    std::string s = "(";
    for (std::size_t i = 0; i < size(); ++i) {
        if (i)
            s += ",";
        s += std::to_string(entries_[i]);
    }
    return s + ")";
}

Rational mi_multinomial(MultiIndex const& mu, MultiIndex const& alpha)
{
    return (mu + alpha).factorial() / (mu.factorial() * alpha.factorial());
}

namespace {

void fill(std::vector<int>& current, std::size_t slot, int remaining, std::vector<MultiIndex>& out)
{
    if (slot + 1 == current.size()) {
        current[slot] = remaining;
        out.emplace_back(current);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        current[slot] = e;
        fill(current, slot + 1, remaining - e, out);
    }
}

} // namespace

std::vector<MultiIndex> multi_indices_of_order(std::size_t dimension, int order)
{
    std::vector<MultiIndex> out;
    if (dimension == 0) {
        if (order == 0)
            out.emplace_back(0);
        return out;
    }
    std::vector<int> current(dimension, 0);
    fill(current, 0, order, out);
    return out;
}

std::vector<MultiIndex> multi_indices_up_to(std::size_t dimension, int max_order)
{
    std::vector<MultiIndex> out;
    for (int k = 0; k <= max_order; ++k) {
        auto layer = multi_indices_of_order(dimension, k);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

} // namespace jetvar
