#pragma once

// Random inputs for property tests. Seeds are fixed by the callers.

#include <algorithm>
#include <random>
#include <vector>

#include "jetvar/bundle.hpp"
#include "jetvar/expr.hpp"
#include "jetvar/form.hpp"

namespace jetvar::gen {

struct PolyShape
{
    int max_order = 2;
    int max_terms = 4;
    int max_degree = 3;
    bool base_coordinates = true;
    bool functions = false;
    int coefficient_range = 5;
};

inline Rational random_rational(std::mt19937& rng, int range)
{
    std::uniform_int_distribution<int> num(-range, range);
    std::uniform_int_distribution<int> den(1, 3);
    Rational r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

inline Atom random_atom(std::mt19937& rng, BundleSpec const& b, PolyShape const& shape)
{
    std::uniform_int_distribution<int> pick(0, 5);
    if (shape.base_coordinates && pick(rng) == 0)
        return Atom::coordinate(std::uniform_int_distribution<int>(0, static_cast<int>(b.dimension()) - 1)(rng));
    int field = std::uniform_int_distribution<int>(0, static_cast<int>(b.field_count()) - 1)(rng);
    int order = std::uniform_int_distribution<int>(0, shape.max_order)(rng);
    auto candidates = multi_indices_of_order(b.dimension(), order);
    auto const& alpha = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
    return Atom::jet(field, alpha);
}

inline Expr random_poly(std::mt19937& rng, BundleSpec const& b, PolyShape const& shape = {})
{
    std::uniform_int_distribution<int> terms(1, shape.max_terms);
    std::uniform_int_distribution<int> degree(0, shape.max_degree);
    Expr out;
    int count = terms(rng);
    for (int t = 0; t < count; ++t) {
        Expr m(random_rational(rng, shape.coefficient_range));
        int deg = degree(rng);
        for (int k = 0; k < deg; ++k)
            m *= Expr::atom(random_atom(rng, b, shape));
        if (shape.functions && std::uniform_int_distribution<int>(0, 4)(rng) == 0) {
            auto f = static_cast<Function>(std::uniform_int_distribution<int>(0, 2)(rng));
            m *= Expr::apply(f, Expr::atom(random_atom(rng, b, shape)));
        }
        out += m;
    }
    return out;
}

/// Random p-form over the contact coframe with theta orders <= max_order.
inline DiffForm random_form(std::mt19937& rng, BundleSpec const& b, int degree, PolyShape const& shape)
{
    std::size_t n = b.dimension();
    DiffForm out(degree);
    int count = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int t = 0; t < count; ++t) {
        Word w;
        for (int k = 0; k < degree; ++k) {
            if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) {
                w.push_back(Covector::dx(std::uniform_int_distribution<int>(0, static_cast<int>(n) - 1)(rng)));
            } else {
                Atom a = random_atom(rng, b, PolyShape{shape.max_order, 1, 1, false});
                w.push_back(Covector::theta(a.index, a.mi));
            }
        }
        out += DiffForm::monomial(random_poly(rng, b, shape), std::move(w));
    }
    return out;
}

} // namespace jetvar::gen

#include "jetvar/dsl.hpp"

namespace jetvar::gen {

/// A well-formed theory over a random bundle; single-letter and multi-letter base names both occur.
inline TheoryFile random_theory(std::mt19937& rng)
{
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto choose = [&](std::vector<std::string> pool, int count) {
        std::shuffle(pool.begin(), pool.end(), rng);
        pool.resize(static_cast<std::size_t>(count));
        return pool;
    };
    std::vector<std::string> base = pick(0, 2) == 0 ? choose({"t", "x", "tau", "r1"}, pick(1, 3))
                                                    : choose({"t", "x", "y", "z"}, pick(1, 3));
    BundleSpec b(base, choose({"u", "v", "A0", "psi"}, pick(1, 2)), choose({"w", "m", "kappa"}, pick(0, 2)));

    PolyShape shape{2, 3, 3, true, pick(0, 3) == 0, 7};
    auto poly = [&](BundleSpec const& over) {
        Expr e = random_poly(rng, over, shape);
        for (auto const& p : over.params())
            if (pick(0, 2) == 0)
                e += Expr::param(p) * random_poly(rng, over, shape);
        return e;
    };

    TheoryFile t;
    t.bundle = b;
    std::size_t n = b.dimension();
    if (pick(0, 1) == 0) {
        MetricDecl m{"g", std::vector<std::vector<Rational>>(n, std::vector<Rational>(n))};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                m.entries[i][j] = m.entries[j][i] = random_rational(rng, 3);
        t.metric = m;
    }
    std::vector<std::string> names{"L", "L2", "X", "Y", "R", "G", "S", "T"};
    std::size_t next = 0;
    for (int k = pick(0, 2); k > 0; --k)
        t.lagrangians.push_back({names[next++], poly(b)});
    for (int k = pick(0, 2); k > 0; --k) {
        ProjectableVectorField u{std::vector<Expr>(n), std::vector<Expr>(b.field_count())};
        for (std::size_t s = 0; s < n; ++s)
            if (pick(0, 1) == 0)
                u.base[s] = Expr(random_rational(rng, 3)) * Expr::coordinate(pick(0, static_cast<int>(n) - 1)).pow(
                                                                static_cast<unsigned>(pick(0, 2)));
        for (auto& f : u.fiber)
            if (pick(0, 1) == 0)
                f = poly(b);
        t.vfields.push_back({names[next++], u});
    }
    for (int k = pick(0, 1); k > 0; --k) {
        GaugeDecl g{names[next++], pick(0, 1) ? std::vector<std::string>{"chi"}
                                              : std::vector<std::string>{"chi", "eta"}, {}};
        BundleSpec ext = g.extended(b);
        for (std::size_t i = 0; i < b.field_count(); ++i) {
            Expr a; // homogeneous linear in the parameter jets
            for (std::size_t p = b.field_count(); p < ext.field_count(); ++p) {
                auto alphas = multi_indices_up_to(n, 2);
                auto const& alpha = alphas[static_cast<std::size_t>(pick(0, static_cast<int>(alphas.size()) - 1))];
                a += random_poly(rng, b, shape) * Expr::jet(static_cast<int>(p), alpha);
            }
            g.action.push_back(a);
        }
        t.gauges.push_back(g);
    }
    if (pick(0, 2) == 0) {
        SourceDecl s{names[next++], {}};
        for (std::size_t i = 0; i < b.field_count(); ++i)
            s.components.push_back(poly(b));
        t.sources.push_back(s);
    }
    return t;
}

} // namespace jetvar::gen
