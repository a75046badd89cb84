#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jetvar/multi_index.hpp"

namespace jetvar {

/// A coordinate symbol: base coordinate x^sigma, jet coordinate y^i_alpha, or named constant.
///
/// Total order: base < jet < parameter; jets by field index then multi-index.
struct Atom
{
    enum class Kind : std::uint8_t { base, jet, param };

    Kind kind = Kind::base;
    int index = 0;  ///< base coordinate slot or field index
    MultiIndex mi;  ///< jet atoms only
    std::string name; ///< parameters only

    static Atom coordinate(int sigma) { return Atom{Kind::base, sigma, {}, {}}; }
    static Atom jet(int field, MultiIndex alpha) { return Atom{Kind::jet, field, std::move(alpha), {}}; }
    static Atom param(std::string name) { return Atom{Kind::param, 0, {}, std::move(name)}; }

    bool is_base() const noexcept { return kind == Kind::base; }
    bool is_jet() const noexcept { return kind == Kind::jet; }
    bool is_param() const noexcept { return kind == Kind::param; }
    int order() const noexcept { return is_jet() ? mi.order() : 0; }

    std::strong_ordering operator<=>(Atom const& other) const;
    bool operator==(Atom const& other) const;
};

enum class Function : std::uint8_t { sin, cos, exp };

char const* function_name(Function f) noexcept;

class Expr;

/// An atom or an elementary function applied to a sub-expression.
struct Factor
{
    Atom atom;
    Function fn = Function::sin;
    std::shared_ptr<Expr const> arg; ///< non-null for function applications

    bool is_function() const noexcept { return arg != nullptr; }

    std::strong_ordering operator<=>(Factor const& other) const;
    bool operator==(Factor const& other) const;
};

struct Power
{
    Factor factor;
    int exponent = 1;
};

/// Product of factor powers, sorted by factor, no repeated factor.
struct Monomial
{
    std::vector<Power> powers;

    bool empty() const noexcept { return powers.empty(); }
    std::strong_ordering operator<=>(Monomial const& other) const;
    bool operator==(Monomial const& other) const;
};

Monomial operator*(Monomial const& a, Monomial const& b);

struct Term
{
    Monomial monomial;
    Rational coeff;
};

/// Symbolic scalar in canonical normal form: a sorted sum of monomials with
/// nonzero exact rational coefficients. Structural equality is mathematical
/// equality on the polynomial fragment; elementary functions are opaque factors.
class Expr
{
public:
    Expr() = default;
    Expr(Rational const& c);
    Expr(int c) : Expr(Rational(c)) {}

    static Expr atom(Atom a);
    static Expr coordinate(int sigma) { return atom(Atom::coordinate(sigma)); }
    static Expr jet(int field, MultiIndex alpha) { return atom(Atom::jet(field, std::move(alpha))); }
    static Expr param(std::string name) { return atom(Atom::param(std::move(name))); }
    /// sin(0) = 0, cos(0) = 1, exp(0) = 1; otherwise an opaque factor.
    static Expr apply(Function f, Expr const& arg);

    std::vector<Term> const& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    /// True for rational constants (including zero).
    bool is_rational() const noexcept;
    std::optional<Rational> rational_value() const;

    /// Base dimension implied by jet atoms (0 when the expression has none).
    int dimension() const noexcept { return dimension_; }

    Expr operator-() const;
    Expr& operator+=(Expr const& other);
    Expr& operator-=(Expr const& other);
    Expr& operator*=(Expr const& other);
    friend Expr operator+(Expr a, Expr const& b) { return a += b; }
    friend Expr operator-(Expr a, Expr const& b) { return a -= b; }
    friend Expr operator*(Expr const& a, Expr const& b);
    Expr pow(unsigned exponent) const;

    bool operator==(Expr const& other) const;
    std::strong_ordering operator<=>(Expr const& other) const;

    /// Visits every atom, including those nested in function arguments.
    void for_each_atom(std::function<void(Atom const&)> const& visit) const;
    std::set<Atom> atoms() const;
    bool depends_on(std::function<bool(Atom const&)> const& pred) const;
    /// Highest jet order among atoms; -1 when no jet atom occurs.
    int max_order() const;
    /// Highest jet order among atoms of the given field; -1 when absent.
    int max_order_of(int field) const;

    /// Generic names (x0, y1[1,0], ...) for diagnostics; real printing lives in the DSL.
    std::string debug_string() const;

    static Expr from_terms(std::vector<Term> terms);

private:
    friend class ExprBuilder;
    void refresh_dimension();

    std::vector<Term> terms_;
    int dimension_ = 0;
};

std::ostream& operator<<(std::ostream& os, Expr const& e);

/// Accumulates terms into canonical form.
class ExprBuilder
{
public:
    void add(Monomial const& m, Rational const& c);
    void add(Expr const& e, Rational const& scale = 1);
    /// Adds `scale * m * e`.
    void add_product(Monomial const& m, Rational const& scale, Expr const& e);
    Expr build();

private:
    std::map<Monomial, Rational> acc_;
};

/// Formal partial derivative, all other atoms independent.
Expr partial(Expr const& e, Atom const& a);

/// Extends `on_atom` (the image of each atom) to a derivation of the expression ring,
/// with the chain rule through elementary functions.
Expr apply_derivation(Expr const& e, std::function<Expr(Atom const&)> const& on_atom);

/// Simultaneous substitution of atoms, then renormalisation.
Expr substitute(Expr const& e, std::map<Atom, Expr> const& bindings);

/// Coefficient of `target` in an expression linear in the atoms selected by `is_var`.
/// Throws UnsupportedStructure if the expression is not linear in those atoms.
std::map<Atom, Expr> linear_coefficients(Expr const& e, std::function<bool(Atom const&)> const& is_var,
                                         Expr* remainder = nullptr);

} // namespace jetvar
