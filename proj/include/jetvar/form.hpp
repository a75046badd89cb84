#pragma once

#include <compare>
#include <map>
#include <vector>

#include "jetvar/expr.hpp"
#include "jetvar/jet.hpp"

namespace jetvar {

/// Basis covector of the contact-adapted coframe: dx^sigma or theta^i_alpha.
/// Basis order: every dx before every theta; dx by slot; theta by field, then multi-index.
struct Covector
{
    enum class Kind : std::uint8_t { dx, theta };

    Kind kind = Kind::dx;
    int index = 0;
    MultiIndex mi;

    static Covector dx(int sigma) { return Covector{Kind::dx, sigma, {}}; }
    static Covector theta(int field, MultiIndex alpha) { return Covector{Kind::theta, field, std::move(alpha)}; }

    bool is_dx() const noexcept { return kind == Kind::dx; }
    bool is_theta() const noexcept { return kind == Kind::theta; }

    std::strong_ordering operator<=>(Covector const& other) const;
    bool operator==(Covector const& other) const;
};

/// Strictly increasing wedge word.
using Word = std::vector<Covector>;

/// A p-form on jet space: sum of coefficient * wedge word, words in canonical order.
class DiffForm
{
public:
    DiffForm() = default;
    explicit DiffForm(int degree) : degree_(degree) {}

    static DiffForm scalar(Expr f);
    static DiffForm dx(int sigma);
    static DiffForm theta(int field, MultiIndex alpha);
    /// d y^i_alpha = theta^i_alpha + y^i_{alpha+lambda} dx^lambda.
    static DiffForm dy(int field, MultiIndex const& alpha);
    /// omega_0 = dx^0 ^ ... ^ dx^{n-1}.
    static DiffForm volume(std::size_t dimension);
    /// omega_sigma = d_sigma contracted into omega_0.
    static DiffForm volume_dual(std::size_t dimension, int sigma);
    /// omega_{sigma mu} = d_mu contracted into d_sigma contracted into omega_0.
    static DiffForm volume_dual(std::size_t dimension, int sigma, int mu);
    /// Builds coeff * (w_0 ^ ... ^ w_k) for an arbitrary (unsorted) word.
    static DiffForm monomial(Expr coeff, Word word);

    int degree() const noexcept { return degree_; }
    std::map<Word, Expr> const& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    /// No theta in any word.
    bool is_horizontal() const;
    Expr coefficient(Word const& word) const;
    int max_order() const;

    DiffForm operator-() const;
    DiffForm& operator+=(DiffForm const& other);
    DiffForm& operator-=(DiffForm const& other);
    friend DiffForm operator+(DiffForm a, DiffForm const& b) { return a += b; }
    friend DiffForm operator-(DiffForm a, DiffForm const& b) { return a -= b; }
    friend DiffForm operator*(Expr const& f, DiffForm const& form);

    bool operator==(DiffForm const& other) const;

    /// Applies `f` to every coefficient, dropping zeros.
    DiffForm map_coefficients(std::function<Expr(Expr const&)> const& f) const;

    std::string debug_string() const;

private:
    void add_term(Word const& word, Expr const& coeff);

    int degree_ = 0;
    std::map<Word, Expr> terms_;
};

DiffForm wedge(DiffForm const& a, DiffForm const& b);

/// Drops every contact monomial.
DiffForm horizontalize(DiffForm const& form);

/// Horizontal differential: D_sigma on coefficients, d_H dx = 0, d_H theta^i_alpha = dx^l ^ theta^i_{alpha+l}.
DiffForm d_H(DiffForm const& form, std::size_t dimension);
/// Vertical differential: d/d y^i_alpha on coefficients, d_V dx = d_V theta = 0.
DiffForm d_V(DiffForm const& form);
/// d = d_H + d_V.
DiffForm d(DiffForm const& form, std::size_t dimension);

/// Graded contraction on the first slot. Throws PreconditionError on 0-forms.
DiffForm interior(ProlongedField const& x, DiffForm const& form);

/// Cartan formula X _| d w + d(X _| w).
DiffForm lie_derivative_form(ProlongedField const& x, DiffForm const& form, std::size_t dimension);

} // namespace jetvar
