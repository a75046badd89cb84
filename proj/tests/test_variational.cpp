#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "jetvar/error.hpp"
#include "jetvar/ibp.hpp"
#include "jetvar/variational.hpp"

using namespace jetvar;

namespace {

Rational const half(1, 2);

BundleSpec const line{{"x"}, {"u"}};
BundleSpec const plane{{"t", "x"}, {"u"}};
BundleSpec const osc1d{{"t"}, {"q"}, {"w"}};

Expr y(int field, MultiIndex a) { return Expr::jet(field, std::move(a)); }
Expr w() { return Expr::param("w"); }

Expr oscillator() // 1/2 q_t^2 - 1/2 w^2 q^2
{
    return Expr(half) * y(0, {1}).pow(2) - Expr(half) * w().pow(2) * y(0, {0}).pow(2);
}

Expr wave() // 1/2 (u_t^2 - u_x^2)
{
    return Expr(half) * (y(0, {1, 0}).pow(2) - y(0, {0, 1}).pow(2));
}

// Maxwell toy on [t, x] with fields A0, A1 and metric diag(1, -1).
struct Maxwell
{
    BundleSpec theory{{"t", "x"}, {"A0", "A1"}};
    BundleSpec bundle = theory.extended({"chi"});
    int chi = 2;
    Rational g[2][2] = {{1, 0}, {0, -1}};

    /// F_{ab} = d_a A_b - d_b A_a
    Expr F(int a, int b) const
    {
        return y(b, theory.unit(a)) - y(a, theory.unit(b));
    }
    /// F^{ab}, indices raised with the (diagonal) metric
    Expr Fup(int a, int b) const { return Expr(g[a][a] * g[b][b]) * F(a, b); }

    /// -1/4 F_{ab} F^{ab}
    Expr lagrangian() const
    {
        Expr out;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                out += Expr(Rational(-1, 4)) * F(a, b) * Fup(a, b);
        return out;
    }

    Expr chi_jet(MultiIndex a) const { return y(chi, std::move(a)); }

    GaugeGenerator gauge(Expr delta = Expr()) const
    {
        return GaugeGenerator(bundle, {chi},
                              {chi_jet({1, 0}) + delta * chi_jet({0, 0}), chi_jet({0, 1})});
    }
};

} // namespace

// ---- Euler-Lagrange --------------------------------------------------------

TEST(EulerLagrange, Examples)
{
    Expr dirichlet = Expr(half) * y(0, {1}).pow(2);
    EXPECT_EQ(euler_lagrange(dirichlet, line).components.at(0), -y(0, {2}));
    EXPECT_EQ(euler_lagrange(wave(), plane).components.at(0), -y(0, {2, 0}) + y(0, {0, 2}));
    EXPECT_EQ(euler_lagrange(oscillator(), osc1d).components.at(0), -y(0, {2}) - w().pow(2) * y(0, {0}));
}

TEST(EulerLagrange, TotalDerivativesAreTrivial)
{
    std::mt19937 rng(11);
    gen::PolyShape shape{2, 4, 3, true, true, 5};
    for (int k = 0; k < 25; ++k) {
        Expr f = gen::random_poly(rng, plane, shape);
        EXPECT_TRUE(euler_lagrange(total_derivative(f, 1), plane).is_zero()) << f.debug_string();
    }
}

TEST(EulerLagrange, InvariantUnderHorizontallyExactTerms)
{
    std::mt19937 rng(12);
    BundleSpec b{{"t", "x"}, {"u", "v"}};
    gen::PolyShape shape{2, 3, 3, true, false, 4};
    for (int k = 0; k < 25; ++k) {
        Expr lambda = gen::random_poly(rng, b, shape);
        DiffForm rho(1);
        for (int s = 0; s < 2; ++s)
            rho += gen::random_poly(rng, b, shape) * DiffForm::volume_dual(2, s);
        Expr exact = d_H(rho, 2).coefficient({Covector::dx(0), Covector::dx(1)});
        SourceForm lhs = euler_lagrange(lambda + exact, b);
        SourceForm rhs = euler_lagrange(lambda, b);
        EXPECT_EQ(lhs.components, rhs.components);
    }
}

TEST(EulerLagrange, SubsetOfFieldsAndBundleChecks)
{
    BundleSpec b{{"x"}, {"u", "v"}};
    Expr lambda = y(0, {1}) * y(1, {1});
    SourceForm e = euler_lagrange(lambda, b, {1});
    ASSERT_EQ(e.fields, std::vector<int>{1});
    EXPECT_EQ(e.components.at(0), -y(0, {2}));
    EXPECT_EQ(e.component_for(0), Expr());
    EXPECT_THROW(euler_lagrange(y(0, {1, 0}), line), IncompatibleBundle);
    EXPECT_THROW(euler_lagrange(y(3, {1}), line), IncompatibleBundle);
}

// ---- momentum and the first variation ---------------------------------------

TEST(Momentum, Examples)
{
    Expr dirichlet = Expr(half) * y(0, {1}).pow(2);
    Momentum p = momentum(dirichlet, line);
    EXPECT_EQ(p.components.size(), 1u);
    EXPECT_EQ(p.component(0, {0}, 0), y(0, {1}));

    EXPECT_TRUE(momentum(y(0, {0}).pow(3) + Expr::coordinate(0), line).is_zero());

    Momentum p2 = momentum(Expr(half) * y(0, {2}).pow(2), line);
    EXPECT_EQ(p2.components.size(), 2u);
    EXPECT_EQ(p2.component(0, {0}, 0), -y(0, {3}));
    EXPECT_EQ(p2.component(0, {1}, 0), y(0, {2}));
}

TEST(Momentum, OrderCap)
{
    Expr fourth = y(0, {4}).pow(2);
    EXPECT_THROW(momentum(fourth, line), UnsupportedOrder);
    EXPECT_NO_THROW(momentum(fourth, line, 4));
}

TEST(Momentum, IntegrationByPartsRemainderIsEulerLagrange)
{
    std::mt19937 rng(13);
    BundleSpec b{{"t", "x"}, {"u", "v"}};
    gen::PolyShape shape{3, 3, 3, true, true, 4};
    for (int k = 0; k < 20; ++k) {
        Expr lambda = gen::random_poly(rng, b, shape);
        LinearJetCoefficients c;
        for (Atom const& a : lambda.atoms())
            if (a.is_jet())
                c[{a.index, a.mi}] = partial(lambda, a);
        IntegrationByParts ibp = integrate_by_parts(c, 2);
        SourceForm e = euler_lagrange(lambda, b);
        for (int f = 0; f < 2; ++f)
            EXPECT_EQ(ibp.remainder_of(f), e.components[static_cast<std::size_t>(f)]);
    }
}

TEST(FirstVariation, Examples)
{
    Expr dirichlet = Expr(half) * y(0, {1}).pow(2);
    EXPECT_TRUE(first_variation_residual(dirichlet, EvolutionaryField{{y(0, {0})}}, line).is_zero());
    EXPECT_TRUE(first_variation_residual(oscillator(), EvolutionaryField::zero(1), osc1d).is_zero());
    Expr v = Expr(3) * y(0, {1, 0}) - Expr::coordinate(1) * y(0, {0, 0}) + Expr(Rational(1, 2));
    EXPECT_TRUE(first_variation_residual(wave(), EvolutionaryField{{v}}, plane).is_zero());
}

TEST(FirstVariation, VanishesForRandomPairs)
{
    std::mt19937 rng(14);
    for (int k = 0; k < 40; ++k) {
        BundleSpec const& b = k % 2 ? plane : BundleSpec{{"x"}, {"u", "v"}};
        Expr lambda = gen::random_poly(rng, b, {2, 3, 3, true, k % 4 == 0, 4});
        EvolutionaryField v;
        for (std::size_t f = 0; f < b.field_count(); ++f)
            v.components.push_back(gen::random_poly(rng, b, {1, 2, 2, true, false, 3}));
        DiffForm r = first_variation_residual(lambda, v, b);
        EXPECT_TRUE(r.is_zero()) << lambda.debug_string() << " residual " << r.debug_string();
    }
}

// ---- symmetries and Noether currents ----------------------------------------

TEST(Symmetry, Examples)
{
    EXPECT_EQ(check_symmetry(wave(), ProjectableVectorField::translation(plane, 0), plane).kind,
              SymmetryKind::exact);

    BundleSpec fall{{"t"}, {"q"}};
    Expr lambda = Expr(half) * y(0, {1}).pow(2) - y(0, {0});
    EXPECT_EQ(check_symmetry(lambda, ProjectableVectorField::translation(fall, 0), fall).kind, SymmetryKind::exact);

    ProjectableVectorField shift{{Expr()}, {Expr(1)}};
    SymmetryCheck s = check_symmetry(lambda, shift, fall);
    EXPECT_EQ(s.kind, SymmetryKind::divergence);
    EXPECT_EQ(s.residual, Expr(-1));
    EXPECT_EQ(s.potential.at(0), -Expr::coordinate(0));

    EXPECT_EQ(check_symmetry(oscillator(), ProjectableVectorField::zero(osc1d), osc1d).kind, SymmetryKind::exact);

    ProjectableVectorField scale{{Expr()}, {y(0, {0})}};
    EXPECT_EQ(check_symmetry(Expr(half) * y(0, {1}).pow(2), scale, line).kind, SymmetryKind::none);
}

TEST(Symmetry, DivergencePotentialSolvesTheDivergence)
{
    std::mt19937 rng(15);
    for (int k = 0; k < 20; ++k) {
        std::vector<Expr> k_true{gen::random_poly(rng, plane, {1, 2, 2, true, false, 3}),
                                 gen::random_poly(rng, plane, {1, 2, 2, true, false, 3})};
        Expr f = total_derivative(k_true[0], 0) + total_derivative(k_true[1], 1);
        auto k_found = divergence_potential(f, plane);
        ASSERT_TRUE(k_found.has_value()) << f.debug_string();
        EXPECT_EQ(total_derivative((*k_found)[0], 0) + total_derivative((*k_found)[1], 1), f);
    }
    EXPECT_FALSE(divergence_potential(y(0, {1, 0}).pow(2), plane).has_value());
}

TEST(Noether, Examples)
{
    // energy: eps^t = 1/2 q_t^2 + 1/2 w^2 q^2 in the d_H eps = v _| E convention
    NoetherCurrent energy = noether_current(oscillator(), ProjectableVectorField::translation(osc1d, 0), osc1d);
    ASSERT_EQ(energy.components.size(), 1u);
    EXPECT_EQ(energy.components[0], Expr(half) * y(0, {1}).pow(2) + Expr(half) * w().pow(2) * y(0, {0}).pow(2));

    NoetherCurrent mom = noether_current(wave(), ProjectableVectorField::translation(plane, 1), plane);
    ASSERT_EQ(mom.components.size(), 2u);
    EXPECT_EQ(mom.components[0], y(0, {1, 0}) * y(0, {0, 1}));
    EXPECT_EQ(mom.components[1], -Expr(half) * y(0, {1, 0}).pow(2) - Expr(half) * y(0, {0, 1}).pow(2));

    EXPECT_TRUE(noether_current(wave(), ProjectableVectorField::zero(plane), plane).is_zero());
}

TEST(Noether, NotASymmetryCarriesTheResidual)
{
    ProjectableVectorField scale{{Expr()}, {y(0, {0})}};
    try {
        noether_current(Expr(half) * y(0, {1}).pow(2), scale, line);
        FAIL() << "expected NotASymmetry";
    } catch (NotASymmetry const& e) {
        EXPECT_FALSE(e.residual().empty());
    }
}

TEST(Noether, OffShellIdentityAndWeakConservation)
{
    BundleSpec fall{{"t"}, {"q"}};
    Expr falling = Expr(half) * y(0, {1}).pow(2) - y(0, {0});
    struct Case
    {
        Expr lambda;
        ProjectableVectorField u;
        BundleSpec b;
    };
    std::vector<Case> cases{
        {oscillator(), ProjectableVectorField::translation(osc1d, 0), osc1d},
        {wave(), ProjectableVectorField::translation(plane, 0), plane},
        {wave(), ProjectableVectorField::translation(plane, 1), plane},
        {wave(), ProjectableVectorField{{Expr(), Expr()}, {Expr(1)}}, plane},
        {falling, ProjectableVectorField{{Expr()}, {Expr(1)}}, fall},
        {falling, ProjectableVectorField::translation(fall, 0), fall},
    };
    for (auto const& c : cases) {
        ProlongedField x = ProlongedField::of(c.u, c.b);
        NoetherCurrent eps = noether_current(c.lambda, c.u, c.b);
        SourceForm e = euler_lagrange(c.lambda, c.b);
        Expr v_dot_e;
        for (std::size_t i = 0; i < e.components.size(); ++i)
            v_dot_e += x.vertical.component(i) * e.components[i];
        EXPECT_EQ(eps.divergence(), v_dot_e);
        EXPECT_TRUE(on_shell_divergence(c.lambda, eps, x, c.b).is_zero());
    }
}

// ---- Helmholtz ----------------------------------------------------------------

TEST(Helmholtz, Examples)
{
    SourceForm first{{0}, {y(0, {1})}};
    bool found = false;
    for (auto const& r : helmholtz_residuals(first, line))
        if (r.alpha == MultiIndex{1}) {
            EXPECT_EQ(r.value, Expr(2));
            found = true;
        }
    EXPECT_TRUE(found);
    EXPECT_FALSE(is_locally_variational(first, line));

    EXPECT_TRUE(is_locally_variational(SourceForm{{0}, {y(0, {2})}}, line));
    // E(1/2 u u_x^2) has a nonlinear second-order part
    EXPECT_TRUE(is_locally_variational(euler_lagrange(Expr(half) * y(0, {0}) * y(0, {1}).pow(2), line), line));
}

TEST(Helmholtz, EulerLagrangeImagesAreVariational)
{
    std::mt19937 rng(16);
    for (int k = 0; k < 20; ++k) {
        BundleSpec const& b = k % 2 ? plane : BundleSpec{{"x"}, {"u", "v"}};
        Expr lambda = gen::random_poly(rng, b, {2, 3, 3, true, false, 3});
        for (auto const& r : helmholtz_residuals(euler_lagrange(lambda, b), b))
            EXPECT_TRUE(r.value.is_zero()) << lambda.debug_string();
    }
}

// ---- second variation and Jacobi ---------------------------------------------

TEST(SecondVariation, Examples)
{
    AuxiliaryFields osc = auxiliary_fields(osc1d);
    ASSERT_EQ(osc.bundle.fields().back(), "zeta");
    int z = osc.aux.at(0);
    std::size_t n = 1;
    Expr d2 = second_variation(oscillator(), osc.variation(), osc.bundle).coefficient({Covector::dx(0)});
    EXPECT_EQ(d2, y(z, {1}).pow(2) - w().pow(2) * y(z, {0}).pow(2));

    AuxiliaryFields dir = auxiliary_fields(line);
    Expr d2_dir = second_variation(Expr(half) * y(0, {1}).pow(2), dir.variation(), dir.bundle)
                      .coefficient(DiffForm::volume(n).terms().begin()->first);
    EXPECT_EQ(d2_dir, y(dir.aux[0], {1}).pow(2));

    Expr linear = Expr(3) * y(0, {2}) - Expr::coordinate(0) * y(0, {1});
    EXPECT_TRUE(second_variation(linear, dir.variation(), dir.bundle).is_zero());
}

TEST(SecondVariation, AuxiliaryNames)
{
    BundleSpec two{{"x"}, {"u", "v"}};
    EXPECT_EQ(auxiliary_fields(two).bundle.fields(), (std::vector<std::string>{"u", "v", "zetau", "zetav"}));
    BundleSpec clash{{"x"}, {"zeta"}};
    EXPECT_NE(auxiliary_fields(clash).bundle.fields().back(), "zeta");
}

TEST(Jacobi, Examples)
{
    AuxiliaryFields osc = auxiliary_fields(osc1d);
    int z = osc.aux[0];
    SourceForm j = jacobi(oscillator(), osc.variation(), osc.bundle);
    EXPECT_EQ(j.components.at(0), -y(z, {2}) - w().pow(2) * y(z, {0}));

    AuxiliaryFields wv = auxiliary_fields(plane);
    int zw = wv.aux[0];
    EXPECT_EQ(jacobi(wave(), wv.variation(), wv.bundle).components.at(0), -y(zw, {2, 0}) + y(zw, {0, 2}));
}

TEST(Jacobi, LinearEquationsHaveBackgroundFreeJacobi)
{
    AuxiliaryFields wv = auxiliary_fields(plane);
    Expr lambda = wave() + Expr::coordinate(0) * y(0, {0, 0});
    SourceForm j = jacobi(lambda, wv.variation(), wv.bundle);
    EXPECT_FALSE(j.components[0].depends_on([](Atom const& a) { return a.is_jet() && a.index == 0; }));
}

TEST(Jacobi, HalfEulerLagrangeOfSecondVariation)
{
    std::mt19937 rng(17);
    for (int k = 0; k < 20; ++k) {
        BundleSpec const& b = k % 2 ? plane : BundleSpec{{"x"}, {"u", "v"}};
        Expr lambda = gen::random_poly(rng, b, {2, 3, 3, true, false, 3});
        AuxiliaryFields aux = auxiliary_fields(b);
        Expr d2 = second_variation(lambda, aux.variation(), aux.bundle)
                      .coefficient(DiffForm::volume(b.dimension()).terms().begin()->first);
        SourceForm el = euler_lagrange(d2, aux.bundle, aux.aux);
        SourceForm j = jacobi(lambda, aux.variation(), aux.bundle);
        for (std::size_t f = 0; f < b.field_count(); ++f)
            EXPECT_EQ(Expr(half) * el.components[f], j.components[f]) << lambda.debug_string();
    }
}

TEST(Jacobi, SelfAdjoint)
{
    std::mt19937 rng(18);
    for (int k = 0; k < 15; ++k) {
        BundleSpec const& b = k % 2 ? plane : BundleSpec{{"x"}, {"u", "v"}};
        Expr lambda = gen::random_poly(rng, b, {2, 3, 3, true, false, 3});
        AuxiliaryFields zeta = auxiliary_fields(b);
        AuxiliaryFields eta = auxiliary_fields(zeta.bundle, zeta.fields, "eta");
        BundleSpec const& big = eta.bundle;
        SourceForm jz = jacobi(lambda, zeta.variation(), big);
        SourceForm je = jacobi(lambda, eta.variation(), big);
        Expr pairing;
        for (std::size_t f = 0; f < b.field_count(); ++f)
            pairing += y(zeta.aux[f], big.zero_index()) * je.components[f] -
                       y(eta.aux[f], big.zero_index()) * jz.components[f];
        EXPECT_TRUE(euler_lagrange(pairing, big, zeta.aux).is_zero());
        EXPECT_TRUE(euler_lagrange(pairing, big, eta.aux).is_zero());
    }
}

TEST(KernelCheck, Examples)
{
    Maxwell m;
    EXPECT_TRUE(kernel_check(m.lagrangian(), m.gauge().variation(), m.bundle));
    AuxiliaryFields osc = auxiliary_fields(osc1d);
    EXPECT_FALSE(kernel_check(oscillator(), osc.variation(), osc.bundle));
    EXPECT_TRUE(kernel_check(oscillator(), EvolutionaryField::zero(1), osc1d));
}

TEST(Omega, Examples)
{
    EXPECT_TRUE(omega_lagrangian(oscillator(), EvolutionaryField::zero(1), osc1d).is_zero());
    AuxiliaryFields osc = auxiliary_fields(osc1d);
    Expr zeta = y(osc.aux[0], {0});
    EXPECT_EQ(omega_lagrangian(oscillator(), osc.variation(), osc.bundle),
              zeta * (-y(0, {2}) - w().pow(2) * y(0, {0})));

    Maxwell m;
    Expr expected;
    for (int mu = 0; mu < 2; ++mu)
        for (int nu = 0; nu < 2; ++nu)
            expected += m.chi_jet(m.theory.unit(mu)) * total_derivative(m.Fup(nu, mu), nu);
    EXPECT_EQ(omega_lagrangian(m.lagrangian(), m.gauge().variation(), m.bundle), expected);
}

// ---- gauge generators, Bianchi, reduced currents, superpotentials ----------------

TEST(Gauge, GeneratorValidation)
{
    Maxwell m;
    EXPECT_EQ(m.gauge().order(), 1);
    EXPECT_EQ(m.gauge().coefficient(0, m.chi, {1, 0}), Expr(1));
    EXPECT_THROW(GaugeGenerator(m.bundle, {m.chi}, {m.chi_jet({1, 0}).pow(2), Expr()}), UnsupportedStructure);
    EXPECT_THROW(GaugeGenerator(m.bundle, {m.chi}, {m.chi_jet({3, 0}), Expr()}), UnsupportedOrder);
    EXPECT_THROW(GaugeGenerator(m.bundle, {0}, {m.chi_jet({1, 0}), Expr()}), PreconditionError);
}

TEST(Bianchi, Examples)
{
    Maxwell m;
    SourceForm beta = bianchi(m.lagrangian(), m.gauge());
    ASSERT_EQ(beta.fields, std::vector<int>{m.chi});
    EXPECT_TRUE(beta.is_zero());

    // order 0: beta = R E
    BundleSpec b = osc1d.extended({"chi"});
    Expr r = Expr(3) * Expr::coordinate(0) + w();
    GaugeGenerator order0(b, {1}, {r * y(1, {0})});
    Expr e = euler_lagrange(oscillator(), osc1d).components[0];
    EXPECT_EQ(bianchi(oscillator(), order0).components.at(0), r * e);

    GaugeGenerator identity(b, {1}, {y(1, {0})});
    EXPECT_EQ(bianchi(oscillator(), identity).components.at(0), e);
    EXPECT_FALSE(bianchi(oscillator(), identity).is_zero());
}

TEST(Bianchi, MatchesIntegrationByPartsOfOmega)
{
    std::mt19937 rng(19);
    BundleSpec b = plane.extended({"chi"});
    for (int k = 0; k < 15; ++k) {
        Expr lambda = gen::random_poly(rng, plane, {2, 3, 3, true, false, 3});
        Expr action;
        for (auto const& a : multi_indices_up_to(2, 2))
            if (std::uniform_int_distribution<int>(0, 2)(rng) == 0)
                action += gen::random_poly(rng, plane, {1, 1, 1, true, false, 3}) * y(1, a);
        GaugeGenerator g(b, {1}, {action});
        Expr omega = omega_lagrangian(lambda, g.variation(), b);
        EXPECT_EQ(bianchi(lambda, g).components.at(0), euler_lagrange(omega, b, {1}).components.at(0));

        // omega = chi beta + D_sigma eps~^sigma
        NoetherCurrent red = reduced_current(lambda, g);
        EXPECT_EQ(omega, y(1, {0, 0}) * bianchi(lambda, g).components.at(0) + red.divergence());
    }
}

TEST(GaugeGate, BianchiAgreesWithKernel)
{
    Maxwell m;
    EXPECT_TRUE(bianchi(m.lagrangian(), m.gauge()).is_zero());
    EXPECT_TRUE(kernel_check(m.lagrangian(), m.gauge().variation(), m.bundle));

    BundleSpec pb = m.bundle.with_params({"delta"});
    GaugeGenerator broken(pb, {m.chi}, {m.chi_jet({1, 0}) + Expr::param("delta") * m.chi_jet({0, 0}),
                                        m.chi_jet({0, 1})});
    EXPECT_FALSE(bianchi(m.lagrangian(), broken).is_zero());
    EXPECT_FALSE(kernel_check(m.lagrangian(), broken.variation(), pb));
}

TEST(ReducedCurrent, Examples)
{
    Maxwell m;
    NoetherCurrent red = reduced_current(m.lagrangian(), m.gauge());
    ASSERT_EQ(red.components.size(), 2u);
    for (int mu = 0; mu < 2; ++mu) {
        Expr expected;
        for (int nu = 0; nu < 2; ++nu)
            expected += m.chi_jet({0, 0}) * total_derivative(m.Fup(nu, mu), nu);
        EXPECT_EQ(red.components[static_cast<std::size_t>(mu)], expected);
    }

    BundleSpec b = osc1d.extended({"chi"});
    EXPECT_TRUE(reduced_current(oscillator(), GaugeGenerator(b, {1}, {y(1, {0})})).is_zero());

    BundleSpec pb = plane.extended({"chi"});
    Expr trivial = total_derivative(y(0, {0, 0}).pow(3), 0);
    EXPECT_TRUE(reduced_current(trivial, GaugeGenerator(pb, {1}, {y(1, {1, 1})})).is_zero());
}

TEST(Superpotential, Maxwell)
{
    Maxwell m;
    GaugeGenerator g = m.gauge();
    Superpotential nu = superpotential(m.lagrangian(), g);
    EXPECT_EQ(nu.component(0, 1), m.chi_jet({0, 0}) * m.Fup(0, 1));
    EXPECT_EQ(nu.component(1, 0), -nu.component(0, 1));

    ProlongedField x{{Expr(), Expr()}, g.variation()};
    NoetherCurrent eps = noether_current(m.lagrangian(), x, m.bundle);
    NoetherCurrent red = reduced_current(m.lagrangian(), g);
    NoetherCurrent strong = eps - red;
    EXPECT_EQ(d_H(nu.to_form(), 2), strong.to_form());
    EXPECT_TRUE(strong.divergence().is_zero());
    EXPECT_TRUE(d_H(strong.to_form(), 2).is_zero());
}

TEST(Superpotential, WithTranslation)
{
    Maxwell m;
    Superpotential nu = superpotential(m.lagrangian(), m.gauge(), {Expr(1), Expr()});
    ProlongedField x{{Expr(1), Expr()}, m.gauge().variation()};
    NoetherCurrent strong = noether_current(m.lagrangian(), x, m.bundle) - reduced_current(m.lagrangian(), m.gauge());
    EXPECT_EQ(nu.divergence().components, strong.components);
}

TEST(Superpotential, Errors)
{
    Maxwell m;
    GaugeGenerator none(m.bundle, {m.chi}, {Expr(), Expr()});
    EXPECT_TRUE(superpotential(m.lagrangian(), none).is_zero());

    BundleSpec b = osc1d.extended({"chi"});
    EXPECT_THROW(superpotential(oscillator(), GaugeGenerator(b, {1}, {Expr()})), DegenerateDimension);
    EXPECT_THROW(superpotential(oscillator(), GaugeGenerator(b, {1}, {y(1, {0})})), BianchiObstruction);

    BundleSpec pb = m.bundle.with_params({"delta"});
    GaugeGenerator broken(pb, {m.chi}, {m.chi_jet({1, 0}) + Expr::param("delta") * m.chi_jet({0, 0}),
                                        m.chi_jet({0, 1})});
    EXPECT_THROW(superpotential(m.lagrangian(), broken), BianchiObstruction);
}

// ---- naturality and the energy-momentum current --------------------------------

TEST(Naturality, Maxwell)
{
    Maxwell m;
    for (int sigma = 0; sigma < 2; ++sigma) {
        NaturalityResiduals r =
            naturality_residuals(m.lagrangian(), ProjectableVectorField::translation(m.theory, sigma), m.gauge());
        EXPECT_TRUE(r.r3_vanishes);
        EXPECT_TRUE(r.r4_vanishes);
    }
    NaturalityResiduals zero = naturality_residuals(m.lagrangian(), ProjectableVectorField::zero(m.theory), m.gauge());
    EXPECT_TRUE(zero.r4.is_zero());
    EXPECT_TRUE(zero.r3_vanishes);

    NaturalityResiduals empty =
        naturality_residuals(Expr(), ProjectableVectorField::translation(m.theory, 0), m.gauge());
    EXPECT_TRUE(empty.r3.is_zero());
    EXPECT_TRUE(empty.r4.is_zero());
}

TEST(Naturality, RequiresKernel)
{
    Maxwell m;
    BundleSpec pb = m.bundle.with_params({"delta"});
    GaugeGenerator broken(pb, {m.chi}, {m.chi_jet({1, 0}) + Expr::param("delta") * m.chi_jet({0, 0}),
                                        m.chi_jet({0, 1})});
    EXPECT_THROW(naturality_residuals(m.lagrangian(), ProjectableVectorField::translation(m.theory, 0), broken),
                 PreconditionError);
    EXPECT_THROW(energy_momentum_current(m.lagrangian(), broken), PreconditionError);
}

TEST(EnergyMomentum, Examples)
{
    Maxwell m;
    NoetherCurrent c = energy_momentum_current(m.lagrangian(), m.gauge());
    EXPECT_TRUE(d_H(c.to_form(), 2).is_zero());

    GaugeGenerator none(m.bundle, {m.chi}, {Expr(), Expr()});
    EXPECT_TRUE(energy_momentum_current(m.lagrangian(), none).is_zero());

    // linear Lagrangian, order-0 generator: E is constant, p_omega has nothing to pair with
    BundleSpec b = plane.extended({"chi"});
    Expr linear = Expr::coordinate(0) * y(0, {0, 0});
    GaugeGenerator g0(b, {1}, {Expr(2) * y(1, {0, 0})});
    EXPECT_TRUE(energy_momentum_current(linear, g0).is_zero());
}
