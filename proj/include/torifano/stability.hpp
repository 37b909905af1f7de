#pragma once

#include "torifano/moments.hpp"
#include "torifano/polytope.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace torifano {

struct DecompositionReport {
    bool valid = false;
    std::vector<Ampleness> row_classes;
    /// "row i: ..." / "column j sums to p/q" for every failing check.
    std::vector<std::string> failures;
};

/// Per-row ampleness plus the Minkowski normalization (every column of the
/// support matrix sums to 1). Throws InputError on a shape mismatch.
DecompositionReport validate_decomposition(const Fan& fan, const QMatrix& support_matrix);

/// k polytopes whose Minkowski sum is the anticanonical polytope.
///
/// Built either from a fan and a k x m support matrix, or from raw halfspace
/// descriptions sharing one normal list. `exact()` is false when some datum
/// came from a floating-point value; verdicts then use a tolerance.
class Decomposition {
public:
    /// Throws InputError (with the report's failures) unless the matrix is valid.
    static Decomposition from_support(Fan fan, QMatrix support_matrix, bool exact = true);

    /// Raw route: every part has the same normals (in the same order) and
    /// offsets summing to 1 column-wise.
    static Decomposition from_polytopes(std::vector<Polytope> parts, bool exact = true);

    std::size_t size() const { return parts_.size(); }
    int dimension() const { return parts_.front().dimension; }
    bool exact() const { return exact_; }
    const std::vector<Polytope>& polytopes() const { return parts_; }
    const std::vector<SimplexMesh>& meshes() const { return meshes_; }
    const std::optional<Fan>& fan() const { return fan_; }
    /// Row i holds the offsets of part i (support numbers in the fan route).
    const QMatrix& support_matrix() const { return support_; }

    /// Same decomposition with part i translated by shifts[i]; the shifts must sum to 0.
    Decomposition translated(const std::vector<QVector>& shifts) const;

private:
    Decomposition() = default;
    void build_meshes();

    std::optional<Fan> fan_;
    QMatrix support_;
    std::vector<Polytope> parts_;
    std::vector<SimplexMesh> meshes_;
    bool exact_ = true;
};

/// Exact sum of the barycenters of the parts.
QVector sum_barycenter(const Decomposition& d);

struct KEVerdict {
    bool exists = false;
    QVector barycenter_sum;
    /// -sum of barycenters when the criterion fails.
    std::optional<QVector> destabilizer;
    bool exact_test = true;  // exact zero test vs tolerance on the float value
    double tolerance = 0;
    double residual_norm = 0;  // max-norm of the barycenter sum
};

inline constexpr double kDefaultTolerance = 1e-10;

/// Exists iff the barycenters sum to zero (exactly, or within `tol` when the
/// decomposition carries floating-point data).
KEVerdict coupled_ke_verdict(const Decomposition& d, double tol = kDefaultTolerance);

/// sum_i A_{P_i}(V_i).
Eigen::VectorXd soliton_residual(const Decomposition& d, const std::vector<Eigen::VectorXd>& vs);

struct SolitonOptions {
    double tol = kDefaultTolerance;
    int max_iter = 50;
    std::optional<Eigen::VectorXd> start;
};

struct SolitonSolution {
    Eigen::VectorXd v;
    double residual_norm = 0;
    int iterations = 0;
    double hessian_condition = 0;
    std::vector<Eigen::VectorXd> per_polytope_A;
    bool converged = false;
    /// Smallest Hessian eigenvalue seen over all iterates.
    double min_hessian_eigenvalue = 0;
};

/// Damped Newton on V -> sum_i log Vol_V(P_i). On failure returns the best
/// iterate with converged = false.
SolitonSolution solve_soliton(const Decomposition& d, const SolitonOptions& options = {});

struct DFReport {
    QVector v;
    QVector barycenter_sum;
    Rational df_value;
    bool destabilizing = false;
};

/// Donaldson-Futaki invariant <v, sum_i b(P_i)> of the test configuration
/// induced by the toric vector field v.
DFReport df_invariant(const Decomposition& d, const QVector& v);
double df_invariant(const Decomposition& d, const Eigen::VectorXd& v);

/// -sum_i b(P_i), or nullopt when the barycenters already sum to zero.
std::optional<QVector> destabilizer(const Decomposition& d);

struct LiftedConfig {
    Polytope base;
    QVector v;
    Rational cap;
    Polytope lifted;
    Rational lifted_volume;  // from an (n+1)-dimensional triangulation
    Rational predicted_volume;  // Vol(P) * (cap + <v, b(P)>)
    bool identity_holds = false;
};

/// {(p, s) : p in P, -<v,p> <= s <= cap}. Throws DegenerateLiftError unless
/// cap exceeds max over vertices of -<v, vertex>.
LiftedConfig lifted_config(const Polytope& base, const QVector& v, const Rational& cap);

}  // namespace torifano
