#include <set>

#include "jetvar/error.hpp"
#include "jetvar/variational.hpp"
#include "detail.hpp"

namespace jetvar {

bool NoetherCurrent::is_zero() const
{
    for (auto const& c : components)
        if (!c.is_zero())
            return false;
    return true;
}

DiffForm NoetherCurrent::to_form() const
{
    std::size_t n = components.size();
    DiffForm out(static_cast<int>(n) - 1);
    for (std::size_t s = 0; s < n; ++s)
        if (!components[s].is_zero())
            out += components[s] * DiffForm::volume_dual(n, static_cast<int>(s));
    return out;
}

Expr NoetherCurrent::divergence() const
{
    Expr out;
    for (std::size_t s = 0; s < components.size(); ++s)
        out += total_derivative(components[s], static_cast<int>(s));
    return out;
}

NoetherCurrent operator-(NoetherCurrent const& a, NoetherCurrent const& b)
{
    NoetherCurrent out = a;
    out.components.resize(std::max(a.components.size(), b.components.size()));
    for (std::size_t s = 0; s < b.components.size(); ++s)
        out.components[s] -= b.components[s];
    return out;
}

namespace {

Expr monomial_expr(Monomial const& m)
{
    return Expr::from_terms({Term{m, Rational(1)}});
}

Monomial single(Atom a)
{
    return Monomial{{Power{Factor{std::move(a), Function::sin, nullptr}, 1}}};
}

/// m with one power of the factor at position k removed.
Monomial without(Monomial m, std::size_t k)
{
    if (--m.powers[k].exponent == 0)
        m.powers.erase(m.powers.begin() + static_cast<std::ptrdiff_t>(k));
    return m;
}

/// Candidate monomials for K^sigma whose D_sigma could produce `m`.
void candidates_for(Monomial const& m, std::size_t dimension, std::vector<std::set<Monomial>>& out)
{
    for (std::size_t sigma = 0; sigma < dimension; ++sigma) {
        out[sigma].insert(single(Atom::coordinate(static_cast<int>(sigma))) * m);
        for (std::size_t k = 0; k < m.powers.size(); ++k) {
            Factor const& f = m.powers[k].factor;
            if (f.is_function() || !f.atom.is_jet() || f.atom.mi[sigma] == 0)
                continue;
            MultiIndex lower = f.atom.mi;
            --lower[sigma];
            out[sigma].insert(without(m, k) * single(Atom::jet(f.atom.index, lower)));
        }
    }
}

/// Solves A c = b over the rationals; free unknowns are set to zero.
std::optional<std::vector<Rational>> solve(std::vector<std::vector<Rational>> rows, std::size_t unknowns)
{
    std::size_t r = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < unknowns && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][c] == 0)
            ++p;
        if (p == rows.size())
            continue;
        std::swap(rows[p], rows[r]);
        Rational inv = 1 / rows[r][c];
        for (auto& x : rows[r])
            x *= inv;
        for (std::size_t o = 0; o < rows.size(); ++o) {
            if (o == r || rows[o][c] == 0)
                continue;
            Rational f = rows[o][c];
            for (std::size_t k = c; k <= unknowns; ++k)
                rows[o][k] -= f * rows[r][k];
        }
        pivots.push_back(c);
        ++r;
    }
    for (std::size_t o = r; o < rows.size(); ++o)
        if (rows[o][unknowns] != 0)
            return std::nullopt;
    std::vector<Rational> x(unknowns);
    for (std::size_t k = 0; k < pivots.size(); ++k)
        x[pivots[k]] = rows[k][unknowns];
    return x;
}

constexpr std::size_t kMaxCandidates = 400;

} // namespace

std::optional<std::vector<Expr>> divergence_potential(Expr const& f, BundleSpec const& bundle, int rounds)
{
    std::size_t n = bundle.dimension();
    if (f.is_zero())
        return std::vector<Expr>(n);

    std::vector<std::set<Monomial>> cand(n);
    std::set<Monomial> seeds;
    for (auto const& t : f.terms())
        seeds.insert(t.monomial);

    for (int round = 0; round < rounds; ++round) {
        for (auto const& m : seeds)
            candidates_for(m, n, cand);

        std::vector<std::pair<std::size_t, Monomial>> columns;
        for (std::size_t s = 0; s < n; ++s)
            for (auto const& m : cand[s])
                columns.emplace_back(s, m);
        if (columns.size() > kMaxCandidates)
            return std::nullopt;

        std::vector<Expr> images;
        std::map<Monomial, std::size_t> row_of;
        auto row = [&](Monomial const& m) { return row_of.emplace(m, row_of.size()).first->second; };
        for (auto const& t : f.terms())
            row(t.monomial);
        for (auto const& [s, m] : columns) {
            images.push_back(total_derivative(monomial_expr(m), static_cast<int>(s)));
            for (auto const& t : images.back().terms())
                row(t.monomial);
        }

        std::size_t cols = columns.size();
        std::vector<std::vector<Rational>> rows(row_of.size(), std::vector<Rational>(cols + 1));
        for (std::size_t c = 0; c < cols; ++c)
            for (auto const& t : images[c].terms())
                rows[row_of.at(t.monomial)][c] = t.coeff;
        for (auto const& t : f.terms())
            rows[row_of.at(t.monomial)][cols] = t.coeff;

        if (auto x = solve(std::move(rows), cols)) {
            std::vector<Expr> k(n);
            for (std::size_t c = 0; c < cols; ++c)
                if ((*x)[c] != 0)
                    k[columns[c].first] += Expr((*x)[c]) * monomial_expr(columns[c].second);
            return k;
        }

        // widen the ansatz with everything the current candidates produce
        for (auto const& img : images)
            for (auto const& t : img.terms())
                seeds.insert(t.monomial);
    }
    return std::nullopt;
}

SymmetryCheck check_symmetry(Expr const& lambda, ProjectableVectorField const& u, BundleSpec const& bundle)
{
    return check_symmetry(lambda, ProlongedField::of(u, bundle), bundle);
}

SymmetryCheck check_symmetry(Expr const& lambda, ProlongedField const& x, BundleSpec const& bundle)
{
    detail::check_bundle(lambda, bundle);
    std::size_t n = bundle.dimension();
    DiffForm lie = lie_derivative_form(x, lambda * DiffForm::volume(n), n);

    SymmetryCheck out;
    out.residual = detail::top_coefficient(lie, n);
    if (out.residual.is_zero()) {
        out.kind = SymmetryKind::exact;
        out.potential.assign(n, Expr());
        return out;
    }
    if (is_variationally_trivial(out.residual, bundle)) {
        if (auto k = divergence_potential(out.residual, bundle)) {
            out.kind = SymmetryKind::divergence;
            out.potential = std::move(*k);
            return out;
        }
    }
    out.kind = SymmetryKind::none;
    return out;
}

NoetherCurrent noether_current(Expr const& lambda, ProjectableVectorField const& u, BundleSpec const& bundle)
{
    return noether_current(lambda, ProlongedField::of(u, bundle), bundle);
}

NoetherCurrent noether_current(Expr const& lambda, ProlongedField const& x, BundleSpec const& bundle)
{
    SymmetryCheck sym = check_symmetry(lambda, x, bundle);
    if (sym.kind == SymmetryKind::none)
        throw NotASymmetry("the field is not a symmetry of the Lagrangian", sym.residual.debug_string());

    std::size_t n = bundle.dimension();
    NoetherCurrent out;
    out.components = momentum(lambda, bundle).contract(x.vertical);
    for (std::size_t s = 0; s < n; ++s) {
        out.components[s] += x.horizontal_component(static_cast<int>(s)) * lambda;
        out.components[s] -= sym.potential[s];
        out.components[s] = -out.components[s];
    }
    return out;
}

Expr on_shell_divergence(Expr const& lambda, NoetherCurrent const& eps, ProlongedField const& x,
                         BundleSpec const& bundle)
{
    // d_H eps = sum v^i E_i + rest. Writing each E_i as a fresh symbol e_i and setting the
    // symbols to zero leaves `rest`, which must vanish for a weakly conserved current.
    SourceForm e = euler_lagrange(lambda, bundle);
    Expr div = eps.divergence();
    std::map<Atom, Expr> on_shell;
    BundleSpec names = bundle;
    for (std::size_t k = 0; k < e.fields.size(); ++k) {
        Expr v = x.vertical.component(static_cast<std::size_t>(e.fields[k]));
        if (v.is_zero())
            continue;
        std::string sym = names.fresh_name("e" + bundle.fields()[static_cast<std::size_t>(e.fields[k])]);
        names = names.with_params({sym});
        Atom a = Atom::param(sym);
        div += v * (Expr::atom(a) - e.components[k]);
        on_shell.emplace(a, Expr());
    }
    return substitute(div, on_shell);
}

} // namespace jetvar
