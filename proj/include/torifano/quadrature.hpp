#pragma once

#include "torifano/moments.hpp"

#include <functional>
#include <vector>

namespace torifano::quadrature {

struct GaussRule {
    std::vector<double> nodes;    // on [0, 1]
    std::vector<double> weights;  // sum to 1
};

/// q-point Gauss-Legendre rule mapped to [0, 1].
GaussRule gauss_legendre(int points);

/// Collapsed (Duffy) tensor Gauss rule on a simplex with `points` nodes per
/// axis; integrates polynomials of degree <= 2*points - n exactly.
double integrate(const SimplexD& simplex, const std::function<double(const Eigen::VectorXd&)>& f, int points);

/// Points per axis sufficient for exp(<V,x>) times a quadratic at double
/// precision, chosen from the exponent spread over the simplex.
int adaptive_points(const SimplexD& simplex, const Eigen::VectorXd& v);

/// Same quantities as exp_moments_simplex, by quadrature only.
ExpMoments exp_moments(const SimplexD& simplex, const Eigen::VectorXd& v, int order = 2);

}  // namespace torifano::quadrature
