#pragma once

#include "torifano/triangulation.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <vector>

namespace torifano {

/// Exact Lebesgue volume of a triangulated polytope.
Rational volume(const SimplexMesh& mesh);

/// Exact uniform-measure barycenter.
QVector barycenter(const SimplexMesh& mesh);

/// Divided difference exp[x_0, ..., x_m] (nodes may repeat). Node groups
/// with spread below `kSeriesSpread` are summed by the complete-homogeneous
/// symmetric series; wider groups use the ratio recursion.
double exp_divided_difference(std::span<const double> nodes);

inline constexpr double kSeriesSpread = 2.0;
inline constexpr double kExponentGuard = 700.0;

/// A simplex with floating-point vertices.
using SimplexD = std::vector<Eigen::VectorXd>;

SimplexD to_double_simplex(const Simplex& s);

/// Integral of exp(<V,x>) over a simplex: n! Vol * exp[<V,v_0>, ..., <V,v_n>].
/// Throws RangeError when some |<V,v_j>| exceeds 700.
double exp_integral_simplex(const SimplexD& simplex, const Eigen::VectorXd& v);

/// Zeroth, first and second moments of exp(<V,x>) dx over one simplex.
struct ExpMoments {
    double mass = 0;
    Eigen::VectorXd first;
    Eigen::MatrixXd second;
};

/// `order` 0, 1 or 2 selects how many moments are filled in.
ExpMoments exp_moments_simplex(const SimplexD& simplex, const Eigen::VectorXd& v, int order = 2);

/// All weighted quantities of one polytope for one vector field.
///
/// The integrals are taken about the exact barycenter b(P) with the exponent
/// pre-shifted by <V, b(P)>, so the reported volume is
/// exp(<V,b>) * (shifted mass).
struct WeightedMoments {
    double log_volume = 0;          // log Vol_V(P)
    double volume = 0;              // Vol_V(P); may overflow to inf for huge V
    Eigen::VectorXd barycenter;     // A_P(V)
    Eigen::MatrixXd covariance;     // dA/dV, Hessian of log Vol_V(P)
    double err_estimate = 0;        // relative floating-point error bound of the sums
};

WeightedMoments weighted_moments(const SimplexMesh& mesh, const Eigen::VectorXd& v, int order = 2);

double weighted_volume(const SimplexMesh& mesh, const Eigen::VectorXd& v);
Eigen::VectorXd weighted_barycenter(const SimplexMesh& mesh, const Eigen::VectorXd& v);
Eigen::MatrixXd weighted_covariance(const SimplexMesh& mesh, const Eigen::VectorXd& v);

struct MomentReport {
    Rational volume;
    QVector barycenter;
    Eigen::VectorXd vfield;
    double weighted_volume = 0;
    Eigen::VectorXd weighted_barycenter;
    Eigen::MatrixXd covariance;
    double err_estimate = 0;
};

MomentReport moment_report(const SimplexMesh& mesh, const Eigen::VectorXd& v);

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
        abs_ += std::abs(x);
    }
    double value() const { return sum_ + comp_; }
    double abs_total() const { return abs_; }

private:
    double sum_ = 0;
    double comp_ = 0;
    double abs_ = 0;
};

}  // namespace torifano
