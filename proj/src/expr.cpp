#include "jetvar/expr.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "jetvar/error.hpp"

namespace jetvar {

// ---------------------------------------------------------------------------------------------
// ordering
// ---------------------------------------------------------------------------------------------

namespace {

std::strong_ordering compare_rational(Rational const& a, Rational const& b)
{
    int c = cmp(a, b);
    return c < 0 ? std::strong_ordering::less
                 : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

} // namespace

std::strong_ordering Atom::operator<=>(Atom const& other) const
{
    if (auto c = kind <=> other.kind; c != 0)
        return c;
    switch (kind) {
    case Kind::base:
        return index <=> other.index;
    case Kind::jet:
        if (auto c = index <=> other.index; c != 0)
            return c;
        return mi <=> other.mi;
    case Kind::param:
        return name.compare(other.name) <=> 0;
    }
    return std::strong_ordering::equal;
}

bool Atom::operator==(Atom const& other) const
{
    return (*this <=> other) == 0;
}

char const* function_name(Function f) noexcept
{
    switch (f) {
    case Function::sin: return "sin";
    case Function::cos: return "cos";
    case Function::exp: return "exp";
    }
    return "?";
}

std::strong_ordering Factor::operator<=>(Factor const& other) const
{
    if (auto c = is_function() <=> other.is_function(); c != 0)
        return c;
    if (!is_function())
        return atom <=> other.atom;
    if (auto c = fn <=> other.fn; c != 0)
        return c;
    if (arg == other.arg)
        return std::strong_ordering::equal;
    return *arg <=> *other.arg;
}

bool Factor::operator==(Factor const& other) const
{
    return (*this <=> other) == 0;
}

std::strong_ordering Monomial::operator<=>(Monomial const& other) const
{
    std::size_t n = std::min(powers.size(), other.powers.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (auto c = powers[i].factor <=> other.powers[i].factor; c != 0)
            return c;
        if (auto c = powers[i].exponent <=> other.powers[i].exponent; c != 0)
            return c;
    }
    return powers.size() <=> other.powers.size();
}

bool Monomial::operator==(Monomial const& other) const
{
    return (*this <=> other) == 0;
}

Monomial operator*(Monomial const& a, Monomial const& b)
{
    Monomial out;
    out.powers.reserve(a.powers.size() + b.powers.size());
    auto i = a.powers.begin();
    auto j = b.powers.begin();
    while (i != a.powers.end() && j != b.powers.end()) {
        auto c = i->factor <=> j->factor;
        if (c < 0)
            out.powers.push_back(*i++);
        else if (c > 0)
            out.powers.push_back(*j++);
        else {
            out.powers.push_back(Power{i->factor, i->exponent + j->exponent});
            ++i;
            ++j;
        }
    }
    out.powers.insert(out.powers.end(), i, a.powers.end());
    out.powers.insert(out.powers.end(), j, b.powers.end());
    return out;
}

// ---------------------------------------------------------------------------------------------
// construction
// ---------------------------------------------------------------------------------------------

Expr::Expr(Rational const& c)
{
    if (c != 0)
        terms_.push_back(Term{Monomial{}, c});
}

Expr Expr::atom(Atom a)
{
    Expr e;
    e.terms_.push_back(Term{Monomial{{Power{Factor{std::move(a), Function::sin, nullptr}, 1}}}, 1});
    e.refresh_dimension();
    return e;
}

Expr Expr::apply(Function f, Expr const& arg)
{
    if (arg.is_zero())
        return f == Function::sin ? Expr() : Expr(1);
    Expr e;
    e.terms_.push_back(Term{Monomial{{Power{Factor{Atom{}, f, std::make_shared<Expr const>(arg)}, 1}}}, 1});
    e.dimension_ = arg.dimension_;
    return e;
}

Expr Expr::from_terms(std::vector<Term> terms)
{
    ExprBuilder b;
    for (auto& t : terms)
        b.add(t.monomial, t.coeff);
    return b.build();
}

void Expr::refresh_dimension()
{
    int dim = 0;
    for_each_atom([&](Atom const& a) {
        if (!a.is_jet())
            return;
        int d = static_cast<int>(a.mi.size());
        if (dim == 0)
            dim = d;
        else if (dim != d)
            throw IncompatibleBundle("expression mixes jet coordinates of base dimension " + std::to_string(dim) +
                                     " and " + std::to_string(d));
    });
    dimension_ = dim;
}

bool Expr::is_rational() const noexcept
{
    return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.empty());
}

std::optional<Rational> Expr::rational_value() const
{
    if (terms_.empty())
        return Rational(0);
    if (is_rational())
        return terms_[0].coeff;
    return std::nullopt;
}

// ---------------------------------------------------------------------------------------------
// builder
// ---------------------------------------------------------------------------------------------

void ExprBuilder::add(Monomial const& m, Rational const& c)
{
    if (c == 0)
        return;
    auto [it, inserted] = acc_.try_emplace(m, c);
    if (!inserted)
        it->second += c;
}

void ExprBuilder::add(Expr const& e, Rational const& scale)
{
    for (auto const& t : e.terms())
        add(t.monomial, t.coeff * scale);
}

void ExprBuilder::add_product(Monomial const& m, Rational const& scale, Expr const& e)
{
    for (auto const& t : e.terms())
        add(m * t.monomial, scale * t.coeff);
}

Expr ExprBuilder::build()
{
    Expr e;
    e.terms_.reserve(acc_.size());
    for (auto& [m, c] : acc_)
        if (c != 0)
            e.terms_.push_back(Term{m, c});
    acc_.clear();
    e.refresh_dimension();
    return e;
}

// ---------------------------------------------------------------------------------------------
// arithmetic
// ---------------------------------------------------------------------------------------------

namespace {

void check_compatible(Expr const& a, Expr const& b)
{
    if (a.dimension() != 0 && b.dimension() != 0 && a.dimension() != b.dimension())
        throw IncompatibleBundle("operands live over base dimensions " + std::to_string(a.dimension()) + " and " +
                                 std::to_string(b.dimension()));
}

} // namespace

Expr Expr::operator-() const
{
    Expr e = *this;
    for (auto& t : e.terms_)
        t.coeff = -t.coeff;
    return e;
}

Expr& Expr::operator+=(Expr const& other)
{
    check_compatible(*this, other);
    if (&other == this) {
        for (auto& t : terms_)
            t.coeff *= 2;
        return *this;
    }
    std::vector<Term> merged;
    merged.reserve(terms_.size() + other.terms_.size());
    auto i = terms_.begin();
    auto j = other.terms_.begin();
    while (i != terms_.end() && j != other.terms_.end()) {
        auto c = i->monomial <=> j->monomial;
        if (c < 0)
            merged.push_back(std::move(*i++));
        else if (c > 0)
            merged.push_back(*j++);
        else {
            Rational sum = i->coeff + j->coeff;
            if (sum != 0)
                merged.push_back(Term{std::move(i->monomial), sum});
            ++i;
            ++j;
        }
    }
    std::move(i, terms_.end(), std::back_inserter(merged));
    merged.insert(merged.end(), j, other.terms_.end());
    terms_ = std::move(merged);
    if (dimension_ == 0)
        dimension_ = other.dimension_;
    if (terms_.empty())
        dimension_ = 0;
    return *this;
}

Expr& Expr::operator-=(Expr const& other)
{
    return *this += -other;
}

Expr operator*(Expr const& a, Expr const& b)
{
    check_compatible(a, b);
    if (a.is_zero() || b.is_zero())
        return Expr();
    if (auto c = a.rational_value()) {
        Expr e = b;
        for (auto& t : e.terms_)
            t.coeff *= *c;
        return e;
    }
    if (auto c = b.rational_value())
        return b * a;
    ExprBuilder builder;
    for (auto const& ta : a.terms())
        for (auto const& tb : b.terms())
            builder.add(ta.monomial * tb.monomial, ta.coeff * tb.coeff);
    return builder.build();
}

Expr& Expr::operator*=(Expr const& other)
{
    *this = *this * other;
    return *this;
}

Expr Expr::pow(unsigned exponent) const
{
    Expr result(1);
    Expr base = *this;
    while (exponent) {
        if (exponent & 1u)
            result *= base;
        exponent >>= 1u;
        if (exponent)
            base *= base;
    }
    return result;
}

bool Expr::operator==(Expr const& other) const
{
    return (*this <=> other) == 0;
}

std::strong_ordering Expr::operator<=>(Expr const& other) const
{
    std::size_t n = std::min(terms_.size(), other.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (auto c = terms_[i].monomial <=> other.terms_[i].monomial; c != 0)
            return c;
        if (auto c = compare_rational(terms_[i].coeff, other.terms_[i].coeff); c != 0)
            return c;
    }
    return terms_.size() <=> other.terms_.size();
}

// ---------------------------------------------------------------------------------------------
// inspection
// ---------------------------------------------------------------------------------------------

void Expr::for_each_atom(std::function<void(Atom const&)> const& visit) const
{
    for (auto const& t : terms_)
        for (auto const& p : t.monomial.powers) {
            if (p.factor.is_function())
                p.factor.arg->for_each_atom(visit);
            else
                visit(p.factor.atom);
        }
}

std::set<Atom> Expr::atoms() const
{
    std::set<Atom> out;
    for_each_atom([&](Atom const& a) { out.insert(a); });
    return out;
}

bool Expr::depends_on(std::function<bool(Atom const&)> const& pred) const
{
    bool found = false;
    for_each_atom([&](Atom const& a) {
        if (!found && pred(a))
            found = true;
    });
    return found;
}

int Expr::max_order() const
{
    int m = -1;
    for_each_atom([&](Atom const& a) {
        if (a.is_jet())
            m = std::max(m, a.order());
    });
    return m;
}

int Expr::max_order_of(int field) const
{
    int m = -1;
    for_each_atom([&](Atom const& a) {
        if (a.is_jet() && a.index == field)
            m = std::max(m, a.order());
    });
    return m;
}

namespace {

void debug_atom(std::ostream& os, Atom const& a)
{
    switch (a.kind) {
    case Atom::Kind::base:
        os << "x" << a.index;
        break;
    case Atom::Kind::jet:
        os << "y" << a.index;
        if (a.order() > 0) {
            os << "[";
            for (std::size_t i = 0; i < a.mi.size(); ++i)
                os << (i ? "," : "") << a.mi[i];
            os << "]";
        }
        break;
    case Atom::Kind::param:
        os << a.name;
        break;
    }
}

} // namespace

std::string Expr::debug_string() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto const& t : terms_) {
        Rational c = t.coeff;
        if (!first)
            os << (c < 0 ? " - " : " + ");
        else if (c < 0)
            os << "-";
        first = false;
        Rational mag = abs(c);
        bool unit = mag == 1 && !t.monomial.empty();
        if (!unit)
            os << mag.get_str();
        bool lead = unit;
        for (auto const& p : t.monomial.powers) {
            if (!lead)
                os << "*";
            lead = false;
            if (p.factor.is_function())
                os << function_name(p.factor.fn) << "(" << p.factor.arg->debug_string() << ")";
            else
                debug_atom(os, p.factor.atom);
            if (p.exponent != 1)
                os << "^" << p.exponent;
        }
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, Expr const& e)
{
    return os << e.debug_string();
}

// ---------------------------------------------------------------------------------------------
// calculus on expressions
// ---------------------------------------------------------------------------------------------

namespace {

Monomial without_one(Monomial const& m, std::size_t k)
{
    Monomial out = m;
    if (--out.powers[k].exponent == 0)
        out.powers.erase(out.powers.begin() + static_cast<std::ptrdiff_t>(k));
    return out;
}

class Deriver
{
public:
    explicit Deriver(std::function<Expr(Atom const&)> const& on_atom) : on_atom_(on_atom) {}

    Expr run(Expr const& e)
    {
        ExprBuilder out;
        for (auto const& t : e.terms()) {
            for (std::size_t k = 0; k < t.monomial.powers.size(); ++k) {
                Power const& p = t.monomial.powers[k];
                Expr const& d = of_factor(p.factor);
                if (d.is_zero())
                    continue;
                out.add_product(without_one(t.monomial, k), t.coeff * p.exponent, d);
            }
        }
        return out.build();
    }

private:
    Expr const& of_factor(Factor const& f)
    {
        auto it = cache_.find(f);
        if (it != cache_.end())
            return it->second;
        Expr d;
        if (!f.is_function()) {
            d = on_atom_(f.atom);
        } else {
            Expr inner = run(*f.arg);
            if (!inner.is_zero()) {
                switch (f.fn) {
                case Function::sin:
                    d = Expr::apply(Function::cos, *f.arg) * inner;
                    break;
                case Function::cos:
                    d = -(Expr::apply(Function::sin, *f.arg) * inner);
                    break;
                case Function::exp:
                    d = Expr::apply(Function::exp, *f.arg) * inner;
                    break;
                }
            }
        }
        return cache_.emplace(f, std::move(d)).first->second;
    }

    std::function<Expr(Atom const&)> const& on_atom_;
    std::map<Factor, Expr> cache_;
};

} // namespace

Expr apply_derivation(Expr const& e, std::function<Expr(Atom const&)> const& on_atom)
{
    return Deriver(on_atom).run(e);
}

Expr partial(Expr const& e, Atom const& a)
{
    return apply_derivation(e, [&](Atom const& b) { return b == a ? Expr(1) : Expr(); });
}

Expr substitute(Expr const& e, std::map<Atom, Expr> const& bindings)
{
    if (bindings.empty())
        return e;
    std::map<Factor, Expr> image;
    auto image_of = [&](Factor const& f) -> Expr const& {
        auto it = image.find(f);
        if (it != image.end())
            return it->second;
        Expr img;
        if (f.is_function()) {
            img = Expr::apply(f.fn, substitute(*f.arg, bindings));
        } else {
            auto b = bindings.find(f.atom);
            img = b != bindings.end() ? b->second : Expr::atom(f.atom);
        }
        return image.emplace(f, std::move(img)).first->second;
    };
    Expr result;
    for (auto const& t : e.terms()) {
        Expr product(t.coeff);
        for (auto const& p : t.monomial.powers)
            product *= image_of(p.factor).pow(static_cast<unsigned>(p.exponent));
        result += product;
    }
    return result;
}

std::map<Atom, Expr> linear_coefficients(Expr const& e, std::function<bool(Atom const&)> const& is_var,
                                         Expr* remainder)
{
    std::map<Atom, ExprBuilder> acc;
    ExprBuilder rest;
    for (auto const& t : e.terms()) {
        int hits = 0;
        std::size_t where = 0;
        for (std::size_t k = 0; k < t.monomial.powers.size(); ++k) {
            auto const& p = t.monomial.powers[k];
            if (p.factor.is_function()) {
                if (p.factor.arg->depends_on(is_var))
                    throw UnsupportedStructure("variable occurs inside " + std::string(function_name(p.factor.fn)));
                continue;
            }
            if (is_var(p.factor.atom)) {
                hits += p.exponent;
                where = k;
            }
        }
        if (hits == 0) {
            rest.add(t.monomial, t.coeff);
        } else if (hits == 1) {
            acc[t.monomial.powers[where].factor.atom].add(without_one(t.monomial, where), t.coeff);
        } else {
            throw UnsupportedStructure("expression is not linear in the selected variables");
        }
    }
    Expr r = rest.build();
    if (remainder)
        *remainder = std::move(r);
    else if (!r.is_zero())
        throw UnsupportedStructure("expression has a part independent of the selected variables");
    std::map<Atom, Expr> out;
    for (auto& [a, b] : acc) {
        Expr c = b.build();
        if (!c.is_zero())
            out.emplace(a, std::move(c));
    }
    return out;
}

} // namespace jetvar
