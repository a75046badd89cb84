#include <gtest/gtest.h>

#include <cstdlib>

#include "golden_runner.hpp"
#include "jetvar/dsl.hpp"
#include "jetvar/variational.hpp"

using namespace jetvar;
using golden::invoke;

namespace {

std::string theory(char const* name) { return std::string(JETVAR_SOURCE_DIR) + "/theories/" + name; }

/// Restores JETVAR_MAX_ORDER on scope exit.
struct EnvGuard
{
    explicit EnvGuard(char const* value) { ::setenv("JETVAR_MAX_ORDER", value, 1); }
    ~EnvGuard() { ::unsetenv("JETVAR_MAX_ORDER"); }
};

} // namespace

TEST(Cli, WaveLatex)
{
    auto r = invoke({"el", theory("wave.jvt"), "--format", "latex"});
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.out, "-u_{tt}+u_{xx}\n");
    EXPECT_EQ(r.err, "");
}

TEST(Cli, MaxwellBianchi)
{
    auto r = invoke({"bianchi", theory("maxwell.jvt"), "--gauge", "R"});
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.out, "0\n");
}

TEST(Cli, OscillatorSuperpotentialIsObstructed)
{
    auto r = invoke({"superpotential", theory("oscillator.jvt"), "--gauge", "R"});
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_EQ(r.out, "");
    EXPECT_NE(r.err.find("Bianchi obstruction"), std::string::npos) << r.err;
}

TEST(Cli, GoldenFiles)
{
    auto cases = golden::load_cases();
    ASSERT_GE(cases.size(), 20u);
    for (auto const& c : cases) {
        for (char const* fmt : golden::kFormats) {
            auto args = c.args;
            args.insert(args.end(), {"--format", fmt});
            auto r = invoke(args);
            EXPECT_EQ(r.exit_code, c.exit_code) << c.name << " " << fmt << "\n" << r.err;
            EXPECT_EQ(r.out, golden::slurp(golden::golden_path(c, fmt))) << c.name << " " << fmt;
        }
    }
}

// Golden expressions agree with what the library computes directly.
TEST(Cli, GoldenMatchesLibrary)
{
    TheoryFile t = parse(golden::slurp(theory("oscillator.jvt")));
    SourceForm e = euler_lagrange(t.lagrangians[0].density, t.bundle);
    EXPECT_EQ(invoke({"el", theory("oscillator.jvt")}).out, print_expr(e.components[0], t.bundle) + "\n");
    auto j = invoke({"el", theory("oscillator.jvt"), "--format", "json"}).out;
    EXPECT_EQ(parse_json(j, t.bundle), e.components[0]);
}

TEST(Cli, Stdin)
{
    auto r = invoke({"el", "-"}, "bundle { base: [x]; fields: [u]; } lagrangian L = 1/2*u_x^2");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.out, "-u_xx\n");
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(invoke({}).exit_code, 1);
    EXPECT_EQ(invoke({"frobnicate", theory("wave.jvt")}).exit_code, 1);
    EXPECT_EQ(invoke({"el", theory("wave.jvt"), "--format", "xml"}).exit_code, 1);
    EXPECT_EQ(invoke({"el", theory("missing.jvt")}).exit_code, 1);
    EXPECT_EQ(invoke({"noether", theory("wave.jvt")}).exit_code, 1); // two vfields, none chosen
    EXPECT_EQ(invoke({"noether", theory("wave.jvt"), "--vfield", "Q"}).exit_code, 1);
    EXPECT_EQ(invoke({"el", theory("wave.jvt"), "--field", "v"}).exit_code, 1);
    EXPECT_EQ(invoke({"bianchi", theory("wave.jvt")}).exit_code, 1);

    auto r = invoke({"el", "-"}, "bundle { base: [t]; fields: [u]; }\nlagrangian L = u_y");
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.err.find("<stdin>:2:16: undeclared coordinate"), std::string::npos) << r.err;
    EXPECT_EQ(r.out, "");
}

TEST(Cli, MathErrorsExitTwo)
{
    auto r = invoke({"noether", "-", "--vfield", "X"},
                    "bundle { base: [t]; fields: [q]; } lagrangian L = 1/2*q_t^2 - q^2 vfield X = t*d/dq");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("not a symmetry"), std::string::npos) << r.err;
}

TEST(Cli, Verify)
{
    // the perturbed Maxwell generator: Bianchi and Jacobi kernel both fail, so they agree
    EXPECT_EQ(invoke({"bianchi", theory("maxwell.jvt"), "--gauge", "P", "--verify"}).exit_code, 0);
    auto r = invoke({"helmholtz", "-", "--verify"}, "bundle { base: [x]; fields: [u]; } source S : u -> u_x");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_EQ(r.out, "2\n"); // single residual, printed bare
    EXPECT_NE(r.err.find("verification failed"), std::string::npos);
    EXPECT_EQ(invoke({"helmholtz", "-"}, "bundle { base: [x]; fields: [u]; } source S : u -> u_x").exit_code, 0);
}

TEST(Cli, FieldSelector)
{
    auto r = invoke({"el", theory("maxwell.jvt"), "--field", "A1"});
    EXPECT_EQ(r.out, "A0_tx-A1_tt\n");
}

TEST(Cli, MaxOrderEnvironment)
{
    std::string third = "bundle { base: [x]; fields: [u]; } lagrangian L = u_xxxx^2";
    EXPECT_EQ(invoke({"momentum", "-"}, third).exit_code, 2);
    {
        EnvGuard env("4");
        auto r = invoke({"momentum", "-"}, third);
        EXPECT_EQ(r.exit_code, 0) << r.err;
    }
    {
        EnvGuard env("0");
        EXPECT_EQ(invoke({"el", theory("wave.jvt")}).exit_code, 1);
    }
    {
        EnvGuard env("7x");
        EXPECT_EQ(invoke({"el", theory("wave.jvt")}).exit_code, 1);
    }
}

TEST(Cli, Deterministic)
{
    for (char const* fmt : golden::kFormats) {
        auto a = invoke({"check", theory("maxwell.jvt"), "--format", fmt});
        auto b = invoke({"check", theory("maxwell.jvt"), "--format", fmt});
        EXPECT_EQ(a.out, b.out);
        EXPECT_EQ(a.exit_code, 0);
    }
}
