#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace jetvar {

using Rational = mpq_class;

/// n-tuple of derivative counts, one per base coordinate.
///
/// Ordering is graded: lower total order first, then entries compared
/// lexicographically with the larger leading entry first, so that under
/// base [t, x] the second-order indices sort as tt < tx < xx.
class MultiIndex
{
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t dimension) : entries_(dimension, 0) {}
    MultiIndex(std::initializer_list<int> entries) : entries_(entries) {}
    explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {}

    /// The index with a single 1 in slot `sigma`.
    static MultiIndex unit(std::size_t dimension, std::size_t sigma);

    std::size_t size() const noexcept { return entries_.size(); }
    int operator[](std::size_t i) const { return entries_[i]; }
    int& operator[](std::size_t i) { return entries_[i]; }
    std::vector<int> const& entries() const noexcept { return entries_; }

    int order() const noexcept;
    Rational factorial() const;

    /// Entrywise sum; throws Error on length mismatch.
    MultiIndex operator+(MultiIndex const& other) const;
    /// Entrywise difference; requires `contains(other)`.
    MultiIndex operator-(MultiIndex const& other) const;
    MultiIndex raised(std::size_t sigma, int by = 1) const;

    /// True when every entry is >= the matching entry of `other`.
    bool contains(MultiIndex const& other) const;
    bool is_zero() const noexcept { return order() == 0; }

    std::strong_ordering operator<=>(MultiIndex const& other) const;
    bool operator==(MultiIndex const& other) const = default;

    std::string to_string() const;

private:
    std::vector<int> entries_;
};

/// (mu + alpha)! / (mu! alpha!) as an exact rational.
Rational mi_multinomial(MultiIndex const& mu, MultiIndex const& alpha);

/// All multi-indices of length `dimension` with order <= `max_order`, in MultiIndex order.
std::vector<MultiIndex> multi_indices_up_to(std::size_t dimension, int max_order);

/// All multi-indices of length `dimension` with order exactly `order`.
std::vector<MultiIndex> multi_indices_of_order(std::size_t dimension, int order);

} // namespace jetvar
