#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace torifano {

/// h(x) = log( (1/N) sum_y exp(<y, x>) ) over the N vertices y, in
/// log-sum-exp form.
double reference_potential(const std::vector<Eigen::VectorXd>& vertices, const Eigen::VectorXd& x);
Eigen::VectorXd reference_potential_gradient(const std::vector<Eigen::VectorXd>& vertices, const Eigen::VectorXd& x);

struct Interval {
    double lo = 0;
    double hi = 0;
};

/// Uniform grid on [-R, R] with step h; 0 must be a node.
struct GridSpec {
    double R = 8.0;
    double h = 0.004;
};

/// One-dimensional coupled real Monge-Ampere problem
///   f_i'' e^{V_i f_i'} / Vol_{V_i}(P_i) = e^{-t sum f - (1-t) sum h},  f_i'(R) = P_i.
struct MAProblem {
    std::vector<Interval> parts;
    std::vector<double> v;
    GridSpec grid;
};

struct MAState {
    double t = 0;
    std::vector<double> x;
    std::vector<std::vector<double>> f;
    std::vector<std::vector<double>> h_ref;
    std::vector<std::vector<double>> slope;  // f_i' at the nodes
    std::vector<double> rho;                 // e^{-t sum f - (1-t) sum h}
    double mass = 0;                         // integral of rho including the tails
    double tail_left = 0;                    // mass of rho beyond -R
    double tail_right = 0;
    double w_min = 0;
    double x_w = 0;
    double update_norm = 0;
};

/// Grid checks shared by every entry point. Throws ConfigError when
/// h > 0.05, h <= 0, or 0 is not a node.
std::vector<double> make_grid(const GridSpec& grid);

/// Recomputes rho, mass, tails and the w minimum from t, f and h_ref.
/// Tails beyond [-R, R] use the exponential decay rate of rho at the ends.
void refresh_density(MAState& state);

/// f_i = h_i (the reference potentials) with rho and diagnostics filled in.
MAState initial_state(const MAProblem& problem, double t);

/// One relaxed transport update: new slopes are the monotone rearrangement
/// of rho onto the e^{V_i p} dp measure on P_i; constants are pinned by
/// f_1(0) = ... = f_k(0) and, for t > 0, by unit mass.
MAState ma_step_1d(const MAProblem& problem, const MAState& state, double relaxation);

struct WDiagnostics {
    double m = 0;
    double x_w = 0;
    double growth_eps = 0;
};

/// w = sum_i (t f_i + (1-t) h_i): minimum, minimizer, and the largest eps
/// with w(x) >= eps |x - x_w| + m - 0.1 on the grid.
WDiagnostics w_diagnostics(const MAState& state);

/// Mass-normalized quadrature of (sum_i f_i') e^{-sum f_i}, tails included.
double obstruction_residual(const MAState& state);

/// [G_i(f_i'(R)) - G_i(f_i'(-R))] / Vol_{V_i}(P_i) plus the tail fraction of
/// rho; 1 for a transport update.
double transport_mass_identity(const MAProblem& problem, const MAState& state, std::size_t part);

struct DualPotential {
    Interval domain;
    std::vector<double> p;
    std::vector<double> u;
};

/// Discrete Legendre transform u(p) = max_x (p x - f(x)) on `points` nodes of P.
/// Throws DomainMismatchError when the slope range of f misses the interior of P
/// by more than 5% of its length at either end.
DualPotential legendre_dual(const std::vector<double>& x, const std::vector<double>& f, Interval domain, int points);

struct ContinuityOptions {
    std::vector<double> t_schedule{0.0, 0.25, 0.5, 0.75, 0.9, 1.0};
    double tol = 1e-9;
    int max_iter = 5000;
    double relaxation = 0.5;
    int stall_window = 50;
    double stall_ratio = 0.99;
    std::function<void(const MAState&, int iterations)> on_t_complete;
};

enum class MAStatus { Converged, Obstructed };

struct ContinuityStep {
    double t = 0;
    int iterations = 0;
    double update_norm = 0;
    double x_w = 0;
    double mass = 0;
};

struct MAResult {
    MAStatus status = MAStatus::Obstructed;
    MAState state;
    std::string reason;
    double t_reached = 0;
    std::vector<ContinuityStep> path;
    /// sum_i A_{P_i}(V_i) from the moments module.
    double soliton_residual = 0;
    double obstruction_residual = 0;
    WDiagnostics w;
};

/// Warm-started sweep over the t schedule. Obstructed when the update stalls
/// (less than 1% decrease over 50 iterations), max_iter is exhausted, or the
/// minimizer of w leaves [-R/2, R/2].
MAResult solve_continuity_1d(const MAProblem& problem, const ContinuityOptions& options = {});

/// Throws InputError unless the intervals sum to [-1, 1] and each is nonempty.
void check_decomposition_1d(const MAProblem& problem);

}  // namespace torifano
