#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jetvar/bundle.hpp"
#include "jetvar/expr.hpp"
#include "jetvar/jet.hpp"
#include "jetvar/variational.hpp"

// Theory files (.jvt):
//
//   bundle { base: [t, x]; fields: [u]; params: [w]; }
//   metric g = [[1, 0], [0, -1]]
//   lagrangian L = 1/2*(u_t^2 - u_x^2)
//   vfield X = d/dt + u*d/du
//   gauge R(chi) : u -> chi_t
//   source S : u -> u_x
//
// Statements end at the next keyword or ';'. '#' starts a comment.

namespace jetvar {

struct MetricDecl
{
    std::string name;
    std::vector<std::vector<Rational>> entries;

    bool operator==(MetricDecl const&) const = default;
};

struct LagrangianDecl
{
    std::string name;
    Expr density;

    bool operator==(LagrangianDecl const&) const = default;
};

struct VectorFieldDecl
{
    std::string name;
    ProjectableVectorField field;

    bool operator==(VectorFieldDecl const& other) const;
};

/// `gauge R(chi, ...) : field -> expr, ...`; actions live on the bundle extended by the parameters.
struct GaugeDecl
{
    std::string name;
    std::vector<std::string> parameters;
    std::vector<Expr> action; ///< one per theory field, zero if unmentioned

    GaugeGenerator generator(BundleSpec const& theory) const;
    BundleSpec extended(BundleSpec const& theory) const { return theory.extended(parameters); }

    bool operator==(GaugeDecl const&) const = default;
};

/// `source S : field -> expr, ...`
struct SourceDecl
{
    std::string name;
    std::vector<Expr> components; ///< one per field

    SourceForm form() const;

    bool operator==(SourceDecl const&) const = default;
};

struct TheoryFile
{
    BundleSpec bundle;
    std::optional<MetricDecl> metric;
    std::vector<LagrangianDecl> lagrangians;
    std::vector<VectorFieldDecl> vfields;
    std::vector<GaugeDecl> gauges;
    std::vector<SourceDecl> sources;

    LagrangianDecl const* find_lagrangian(std::string const& name) const;
    VectorFieldDecl const* find_vfield(std::string const& name) const;
    GaugeDecl const* find_gauge(std::string const& name) const;
    SourceDecl const* find_source(std::string const& name) const;

    bool operator==(TheoryFile const&) const = default;
};

/// Throws ParseError with the line and column of the offending token.
TheoryFile parse(std::string_view text);

/// A single expression over `bundle` (no basis vectors, no metric).
Expr parse_expr(std::string_view text, BundleSpec const& bundle);

/// Theory source that parses back to an equal TheoryFile.
std::string print(TheoryFile const& theory);

/// Expression in theory-file syntax: u_tx under single-letter base names, u[1,1] otherwise.
std::string print_expr(Expr const& e, BundleSpec const& bundle);

std::string print_latex(Expr const& e, BundleSpec const& bundle);

/// {"schema":1,"terms":[{"coeff":"p/q","atoms":[...]}]}
std::string print_json(Expr const& e, BundleSpec const& bundle);
/// Inverse of print_json; throws ParseError.
Expr parse_json(std::string_view text, BundleSpec const& bundle);

} // namespace jetvar
