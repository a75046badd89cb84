#include "jetvar/form.hpp"

#include <sstream>

#include "jetvar/error.hpp"
#include "jetvar/jet.hpp"

namespace jetvar {

std::strong_ordering Covector::operator<=>(Covector const& other) const
{
    if (auto c = kind <=> other.kind; c != 0)
        return c;
    if (auto c = index <=> other.index; c != 0)
        return c;
    if (kind == Kind::dx)
        return std::strong_ordering::equal;
    return mi <=> other.mi;
}

bool Covector::operator==(Covector const& other) const
{
    return (*this <=> other) == 0;
}

namespace {

/// Sorts `word` in place; returns the permutation sign, or 0 on a repeated covector.
int canonicalise(Word& word)
{
    int sign = 1;
    for (std::size_t i = 1; i < word.size(); ++i) {
        for (std::size_t j = i; j > 0; --j) {
            auto c = word[j - 1] <=> word[j];
            if (c == 0)
                return 0;
            if (c < 0)
                break;
            std::swap(word[j - 1], word[j]);
            sign = -sign;
        }
    }
    return sign;
}

} // namespace

DiffForm DiffForm::scalar(Expr f)
{
    DiffForm form(0);
    form.add_term({}, f);
    return form;
}

DiffForm DiffForm::dx(int sigma)
{
    return monomial(Expr(1), {Covector::dx(sigma)});
}

DiffForm DiffForm::theta(int field, MultiIndex alpha)
{
    return monomial(Expr(1), {Covector::theta(field, std::move(alpha))});
}

DiffForm DiffForm::dy(int field, MultiIndex const& alpha)
{
    DiffForm form = theta(field, alpha);
    for (std::size_t l = 0; l < alpha.size(); ++l)
        form += Expr::jet(field, alpha.raised(l)) * dx(static_cast<int>(l));
    return form;
}

DiffForm DiffForm::volume(std::size_t dimension)
{
    Word w;
    for (std::size_t s = 0; s < dimension; ++s)
        w.push_back(Covector::dx(static_cast<int>(s)));
    return monomial(Expr(1), std::move(w));
}

DiffForm DiffForm::volume_dual(std::size_t dimension, int sigma)
{
    return interior(ProlongedField::coordinate(dimension, sigma), volume(dimension));
}

DiffForm DiffForm::volume_dual(std::size_t dimension, int sigma, int mu)
{
    return interior(ProlongedField::coordinate(dimension, mu), volume_dual(dimension, sigma));
}

DiffForm DiffForm::monomial(Expr coeff, Word word)
{
    DiffForm form(static_cast<int>(word.size()));
    int sign = canonicalise(word);
    if (sign != 0 && !coeff.is_zero())
        form.add_term(word, sign < 0 ? -coeff : coeff);
    return form;
}

void DiffForm::add_term(Word const& word, Expr const& coeff)
{
    if (coeff.is_zero())
        return;
    if (static_cast<int>(word.size()) != degree_) {
        if (!terms_.empty())
            throw Error("adding forms of different degree");
        degree_ = static_cast<int>(word.size());
    }
    auto [it, inserted] = terms_.try_emplace(word, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

bool DiffForm::is_horizontal() const
{
    for (auto const& [w, c] : terms_)
        for (auto const& cv : w)
            if (cv.is_theta())
                return false;
    return true;
}

Expr DiffForm::coefficient(Word const& word) const
{
    auto it = terms_.find(word);
    return it == terms_.end() ? Expr() : it->second;
}

int DiffForm::max_order() const
{
    int m = -1;
    for (auto const& [w, c] : terms_) {
        m = std::max(m, c.max_order());
        for (auto const& cv : w)
            if (cv.is_theta())
                m = std::max(m, cv.mi.order());
    }
    return m;
}

DiffForm DiffForm::operator-() const
{
    DiffForm out = *this;
    for (auto& [w, c] : out.terms_)
        c = -c;
    return out;
}

DiffForm& DiffForm::operator+=(DiffForm const& other)
{
    if (terms_.empty())
        degree_ = other.degree_;
    else if (!other.terms_.empty() && other.degree_ != degree_)
        throw Error("adding a " + std::to_string(other.degree_) + "-form to a " + std::to_string(degree_) + "-form");
    for (auto const& [w, c] : other.terms_)
        add_term(w, c);
    return *this;
}

DiffForm& DiffForm::operator-=(DiffForm const& other)
{
    return *this += -other;
}

DiffForm operator*(Expr const& f, DiffForm const& form)
{
    DiffForm out(form.degree_);
    for (auto const& [w, c] : form.terms_)
        out.add_term(w, f * c);
    return out;
}

bool DiffForm::operator==(DiffForm const& other) const
{
    if (terms_.empty() || other.terms_.empty())
        return terms_.empty() && other.terms_.empty();
    return degree_ == other.degree_ && terms_ == other.terms_;
}

DiffForm DiffForm::map_coefficients(std::function<Expr(Expr const&)> const& f) const
{
    DiffForm out(degree_);
    for (auto const& [w, c] : terms_)
        out.add_term(w, f(c));
    return out;
}

std::string DiffForm::debug_string() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto const& [w, c] : terms_) {
        if (!first)
            os << " + ";
        first = false;
        os << "(" << c.debug_string() << ")";
        for (auto const& cv : w) {
            if (cv.is_dx())
                os << " dx" << cv.index;
            else
                os << " th" << cv.index << cv.mi.to_string();
        }
    }
    return os.str();
}

DiffForm wedge(DiffForm const& a, DiffForm const& b)
{
    DiffForm out(a.degree() + b.degree());
    for (auto const& [wa, ca] : a.terms())
        for (auto const& [wb, cb] : b.terms()) {
            Word w = wa;
            w.insert(w.end(), wb.begin(), wb.end());
            out += DiffForm::monomial(ca * cb, std::move(w));
        }
    return out;
}

DiffForm horizontalize(DiffForm const& form)
{
    DiffForm out(form.degree());
    for (auto const& [w, c] : form.terms()) {
        bool contact = false;
        for (auto const& cv : w)
            contact = contact || cv.is_theta();
        if (!contact)
            out += DiffForm::monomial(c, w);
    }
    return out;
}

namespace {

/// Replaces w[j] by each term of `image`, with the graded sign (-1)^j of a degree +1 derivation.
void splice(DiffForm& out, Expr const& coeff, Word const& w, std::size_t j, DiffForm const& image)
{
    Expr signed_coeff = (j % 2 == 0) ? coeff : -coeff;
    for (auto const& [iw, ic] : image.terms()) {
        Word nw(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(j));
        nw.insert(nw.end(), iw.begin(), iw.end());
        nw.insert(nw.end(), w.begin() + static_cast<std::ptrdiff_t>(j) + 1, w.end());
        out += DiffForm::monomial(signed_coeff * ic, std::move(nw));
    }
}

DiffForm d_H_of_covector(Covector const& cv, std::size_t n)
{
    DiffForm out(2);
    if (cv.is_dx())
        return out;
    for (std::size_t l = 0; l < n; ++l)
        out += DiffForm::monomial(Expr(1), {Covector::dx(static_cast<int>(l)), Covector::theta(cv.index, cv.mi.raised(l))});
    return out;
}

DiffForm d_H_of_function(Expr const& f, std::size_t n)
{
    DiffForm out(1);
    for (std::size_t s = 0; s < n; ++s)
        out += DiffForm::monomial(total_derivative(f, static_cast<int>(s)), {Covector::dx(static_cast<int>(s))});
    return out;
}

DiffForm d_V_of_function(Expr const& f)
{
    DiffForm out(1);
    for (auto const& a : f.atoms())
        if (a.is_jet())
            out += DiffForm::monomial(partial(f, a), {Covector::theta(a.index, a.mi)});
    return out;
}

} // namespace

DiffForm d_H(DiffForm const& form, std::size_t n)
{
    DiffForm out(form.degree() + 1);
    for (auto const& [w, c] : form.terms()) {
        out += wedge(d_H_of_function(c, n), DiffForm::monomial(Expr(1), w));
        for (std::size_t j = 0; j < w.size(); ++j)
            if (w[j].is_theta())
                splice(out, c, w, j, d_H_of_covector(w[j], n));
    }
    return out;
}

DiffForm d_V(DiffForm const& form)
{
    DiffForm out(form.degree() + 1);
    for (auto const& [w, c] : form.terms())
        out += wedge(d_V_of_function(c), DiffForm::monomial(Expr(1), w));
    return out;
}

DiffForm d(DiffForm const& form, std::size_t dimension)
{
    return d_H(form, dimension) + d_V(form);
}

DiffForm interior(ProlongedField const& x, DiffForm const& form)
{
    if (form.degree() == 0)
        throw PreconditionError("interior product of a 0-form");
    DiffForm out(form.degree() - 1);
    for (auto const& [w, c] : form.terms()) {
        for (std::size_t j = 0; j < w.size(); ++j) {
            Expr slot = w[j].is_dx() ? x.horizontal_component(w[j].index) : x.vertical_component(w[j].index, w[j].mi);
            if (slot.is_zero())
                continue;
            Word rest = w;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
            Expr coeff = c * slot;
            out += DiffForm::monomial(j % 2 == 0 ? coeff : -coeff, std::move(rest));
        }
    }
    return out;
}

DiffForm lie_derivative_form(ProlongedField const& x, DiffForm const& form, std::size_t dimension)
{
    DiffForm out = interior(x, d(form, dimension));
    if (form.degree() > 0)
        out += d(interior(x, form), dimension);
    return out;
}

} // namespace jetvar
