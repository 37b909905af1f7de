#pragma once

#include "torifano/polytope.hpp"

#include <vector>

namespace torifano {

/// n+1 rational vertices in R^n.
using Simplex = std::vector<QVector>;

struct SimplexMesh {
    int dimension = 0;
    std::vector<Simplex> simplices;
};

/// Pulling triangulation: cone from the lexicographically smallest vertex
/// over every facet not containing it, facets triangulated by the same rule.
/// Deterministic for a given vertex set. Throws DegenerateError for
/// lower-dimensional input.
SimplexMesh triangulate(const Polytope& p);

/// |det(v1-v0, ..., vn-v0)| / n!
Rational simplex_volume(const Simplex& s);

}  // namespace torifano
