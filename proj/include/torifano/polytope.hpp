#pragma once

#include "torifano/fan.hpp"
#include "torifano/rational.hpp"

#include <string>
#include <vector>

namespace torifano {

/// The closed halfspace <normal, x> >= -offset.
struct Halfspace {
    QVector normal;
    Rational offset;

    bool contains(std::span<const Rational> x) const { return dot(normal, x) >= -offset; }
    bool is_tight(std::span<const Rational> x) const { return dot(normal, x) == -offset; }
};

enum class Provenance { FanSupport, Raw, Minkowski, Lifted, Translate };

std::string to_string(Provenance p);

/// Bounded, full-dimensional rational polytope carried in both H- and V-form.
///
/// `redundant[j]` is set when halfspace j does not support a facet, i.e. the
/// vertices tight on it span less than a hyperplane.
struct Polytope {
    int dimension = 0;
    std::vector<Halfspace> halfspaces;
    std::vector<QVector> vertices;  // sorted lexicographically, no duplicates
    std::vector<bool> redundant;
    Provenance provenance = Provenance::Raw;

    bool contains(std::span<const Rational> x) const;
    std::size_t redundant_count() const;
};

/// Vertex of each maximal cone: the solution of <d_j, v> = -c_j for j in the cone.
std::vector<QVector> cone_vertices(const Fan& fan, std::span<const Rational> c);

/// Polytope {x : <d_j, x> >= -c_j}. For nef support vectors the vertices are the
/// (merged) cone vertices; otherwise falls back to halfspace enumeration.
/// Throws DegenerateError when the result has empty interior.
Polytope polytope_from_support(const Fan& fan, std::span<const Rational> c);

/// Brute-force vertex enumeration over all n-subsets of halfspaces
/// (n <= 6, at most 32 halfspaces). Throws EmptyPolytopeError,
/// UnboundedPolytopeError (with a recession direction) or DegenerateError.
Polytope polytope_from_halfspaces(std::vector<Halfspace> halfspaces, int dimension);

enum class Ampleness { Ample, NefOnly, NotConvex };

std::string to_string(Ampleness a);

struct AmplenessReport {
    Ampleness kind = Ampleness::Ample;
    int cone = -1;  // witness (cone, ray) for the weakest inequality
    int ray = -1;
    std::string witness;
};

/// Ample iff every cone vertex satisfies every other ray's inequality strictly.
AmplenessReport ampleness_class(const Fan& fan, std::span<const Rational> c);

struct MinkowskiResult {
    QVector support;
    Polytope polytope;
    /// Hull of all vertex sums coincides with `polytope`.
    bool vertex_sum_check = false;
};

/// Adds support vectors over one fan. Every part must be Ample or NefOnly.
MinkowskiResult minkowski_sum(const Fan& fan, const std::vector<QVector>& parts);

/// Vertex set of the Minkowski sum computed from pairwise vertex sums
/// (points of the sum that are not convex combinations of others are kept
/// by checking against the given halfspace description).
bool vertex_sums_match(const std::vector<Polytope>& parts, const Polytope& sum);

/// max over vertices of <u, vertex>.
Rational support_function(const Polytope& p, std::span<const Rational> u);

/// P + t: vertices shift by t, offsets become c_j - <d_j, t>.
Polytope translate(const Polytope& p, std::span<const Rational> t);

/// Recomputes redundancy flags and checks the vertex invariants.
/// Throws DegenerateError if the vertices do not span the full dimension.
void finalize_polytope(Polytope& p);

}  // namespace torifano
