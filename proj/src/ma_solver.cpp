#include "torifano/ma_solver.hpp"

#include "torifano/errors.hpp"
#include "torifano/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace torifano {

double reference_potential(const std::vector<Eigen::VectorXd>& vertices, const Eigen::VectorXd& x) {
    if (vertices.empty()) throw InputError("reference_potential needs at least one vertex");
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& y : vertices) top = std::max(top, y.dot(x));
    double s = 0;
    for (const auto& y : vertices) s += std::exp(y.dot(x) - top);
    return top + std::log(s / static_cast<double>(vertices.size()));
}

Eigen::VectorXd reference_potential_gradient(const std::vector<Eigen::VectorXd>& vertices, const Eigen::VectorXd& x) {
    if (vertices.empty()) throw InputError("reference_potential needs at least one vertex");
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& y : vertices) top = std::max(top, y.dot(x));
    Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
    double s = 0;
    for (const auto& y : vertices) {
        const double w = std::exp(y.dot(x) - top);
        s += w;
        g += w * y;
    }
    return g / s;
}

namespace {

// Vol_V([a,b]) and the inverse of G(p) = int_a^p e^{V s} ds.
double interval_weighted_volume(Interval iv, double v) {
    if (v == 0) return iv.hi - iv.lo;
    return std::exp(v * iv.lo) * std::expm1(v * (iv.hi - iv.lo)) / v;
}

double transport_inverse(Interval iv, double v, double y) {
    if (v == 0) return std::clamp(iv.lo + y, iv.lo, iv.hi);
    return std::clamp(iv.lo + std::log1p(v * y * std::exp(-v * iv.lo)) / v, iv.lo, iv.hi);
}

double transport_forward(Interval iv, double v, double p) {
    if (v == 0) return p - iv.lo;
    return std::exp(v * iv.lo) * std::expm1(v * (p - iv.lo)) / v;
}

std::size_t zero_index(const MAState& s) { return s.x.size() / 2; }

double grid_step(const MAState& s) { return s.x[1] - s.x[0]; }

}  // namespace

void refresh_density(MAState& s) {
    const std::size_t n = s.x.size();
    std::vector<double> log_rho(n, 0.0);
    for (std::size_t i = 0; i < s.f.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) log_rho[j] -= s.t * s.f[i][j] + (1 - s.t) * s.h_ref[i][j];
    const double h = grid_step(s);
    s.rho.resize(n);
    for (std::size_t j = 0; j < n; ++j) s.rho[j] = std::exp(log_rho[j]);
    // exponential tails with the boundary decay rate of log rho
    const double decay_left = std::max((log_rho[1] - log_rho[0]) / h, 1e-3);
    const double decay_right = std::max((log_rho[n - 2] - log_rho[n - 1]) / h, 1e-3);
    s.tail_left = s.rho.front() / decay_left;
    s.tail_right = s.rho.back() / decay_right;
    CompensatedSum inner;
    for (std::size_t j = 0; j + 1 < n; ++j) inner.add(0.5 * h * (s.rho[j] + s.rho[j + 1]));
    s.mass = s.tail_left + inner.value() + s.tail_right;

    const auto w = w_diagnostics(s);
    s.w_min = w.m;
    s.x_w = w.x_w;
}

namespace {

// Integrates slopes by the trapezoid rule outward from the 0 node.
std::vector<double> integrate_slopes(const std::vector<double>& slope, double h, std::size_t zero) {
    std::vector<double> f(slope.size(), 0.0);
    for (std::size_t j = zero + 1; j < slope.size(); ++j) f[j] = f[j - 1] + 0.5 * h * (slope[j - 1] + slope[j]);
    for (std::size_t j = zero; j-- > 0;) f[j] = f[j + 1] - 0.5 * h * (slope[j] + slope[j + 1]);
    return f;
}

void pin_constants(MAState& s) {
    const std::size_t zero = zero_index(s);
    for (auto& fi : s.f) {
        const double c = fi[zero];
        for (auto& val : fi) val -= c;
    }
    refresh_density(s);
    if (s.t > 0) {
        // adding c to every f_i scales the mass by exp(-t k c)
        const double c = std::log(s.mass) / (s.t * static_cast<double>(s.f.size()));
        for (auto& fi : s.f)
            for (auto& val : fi) val += c;
        refresh_density(s);
    }
}

}  // namespace

std::vector<double> make_grid(const GridSpec& grid) {
    if (!(grid.h > 0) || !(grid.R > 0)) throw ConfigError("grid needs R > 0 and h > 0");
    if (grid.h > 0.05) throw ConfigError("grid too coarse: h = " + std::to_string(grid.h) + " > 0.05");
    const double cells = grid.R / grid.h;
    const double rounded = std::round(cells);
    if (std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells))
        throw ConfigError("R / h must be an integer so that 0 is a grid node");
    const auto half = static_cast<std::size_t>(rounded);
    std::vector<double> x(2 * half + 1);
    for (std::size_t j = 0; j < x.size(); ++j)
        x[j] = (static_cast<double>(j) - static_cast<double>(half)) * grid.h;
    x[half] = 0.0;
    return x;
}

void check_decomposition_1d(const MAProblem& problem) {
    if (problem.parts.empty()) throw InputError("1-D problem has no intervals");
    if (problem.v.size() != problem.parts.size()) throw InputError("one vector field per interval required");
    double lo = 0, hi = 0;
    for (std::size_t i = 0; i < problem.parts.size(); ++i) {
        if (!(problem.parts[i].hi > problem.parts[i].lo))
            throw InputError("interval " + std::to_string(i) + " is empty");
        if (!std::isfinite(problem.v[i])) throw InputError("vector field " + std::to_string(i) + " is not finite");
        lo += problem.parts[i].lo;
        hi += problem.parts[i].hi;
    }
    if (std::abs(lo + 1) > 1e-12 || std::abs(hi - 1) > 1e-12)
        throw InputError("intervals must sum to [-1, 1]");
}

MAState initial_state(const MAProblem& problem, double t) {
    if (problem.v.size() != problem.parts.size()) throw InputError("one vector field per interval required");
    MAState s;
    s.t = t;
    s.x = make_grid(problem.grid);
    for (const auto& iv : problem.parts) {
        const std::vector<Eigen::VectorXd> verts{Eigen::VectorXd::Constant(1, iv.lo), Eigen::VectorXd::Constant(1, iv.hi)};
        std::vector<double> h(s.x.size()), slope(s.x.size());
        for (std::size_t j = 0; j < s.x.size(); ++j) {
            const Eigen::VectorXd xj = Eigen::VectorXd::Constant(1, s.x[j]);
            h[j] = reference_potential(verts, xj);
            slope[j] = reference_potential_gradient(verts, xj)[0];
        }
        s.f.push_back(h);
        s.h_ref.push_back(std::move(h));
        s.slope.push_back(std::move(slope));
    }
    pin_constants(s);
    s.update_norm = 0;
    return s;
}

MAState ma_step_1d(const MAProblem& problem, const MAState& state, double relaxation) {
    if (problem.parts.size() != state.f.size()) throw InputError("state and problem disagree on the number of parts");
    if (!(relaxation > 0 && relaxation <= 1)) throw ConfigError("relaxation must lie in (0, 1]");
    const std::size_t n = state.x.size();
    const double h = grid_step(state);
    const std::size_t zero = zero_index(state);

    // cumulative distribution of rho including the left tail
    std::vector<double> cdf(n);
    CompensatedSum running;
    running.add(state.tail_left);
    cdf[0] = running.value();
    for (std::size_t j = 1; j < n; ++j) {
        running.add(0.5 * h * (state.rho[j - 1] + state.rho[j]));
        cdf[j] = running.value();
    }
    const double total = state.mass;

    MAState next = state;
    for (std::size_t i = 0; i < problem.parts.size(); ++i) {
        const Interval iv = problem.parts[i];
        const double vi = problem.v[i];
        const double vol = interval_weighted_volume(iv, vi);
        std::vector<double> slope(n);
        for (std::size_t j = 0; j < n; ++j) {
            slope[j] = transport_inverse(iv, vi, vol * cdf[j] / total);
            if (j > 0 && slope[j] < slope[j - 1]) throw Error("internal: transport map is not monotone");
        }
        const auto candidate = integrate_slopes(slope, h, zero);
        for (std::size_t j = 0; j < n; ++j) {
            next.f[i][j] = (1 - relaxation) * state.f[i][j] + relaxation * candidate[j];
            next.slope[i][j] = (1 - relaxation) * state.slope[i][j] + relaxation * slope[j];
        }
    }
    pin_constants(next);
    double upd = 0;
    for (std::size_t i = 0; i < next.f.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) upd = std::max(upd, std::abs(next.f[i][j] - state.f[i][j]));
    next.update_norm = upd;
    return next;
}

WDiagnostics w_diagnostics(const MAState& state) {
    const std::size_t n = state.x.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < state.f.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) w[j] += state.t * state.f[i][j] + (1 - state.t) * state.h_ref[i][j];
    const auto it = std::min_element(w.begin(), w.end());
    const auto arg = static_cast<std::size_t>(it - w.begin());
    WDiagnostics d;
    d.m = *it;
    d.x_w = state.x[arg];
    d.growth_eps = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        if (j == arg) continue;
        d.growth_eps = std::min(d.growth_eps, (w[j] - d.m + 0.1) / std::abs(state.x[j] - d.x_w));
    }
    return d;
}

double obstruction_residual(const MAState& state) {
    const std::size_t n = state.x.size();
    const double h = grid_step(state);
    std::vector<double> log_density(n, 0.0), slope_sum(n, 0.0);
    for (std::size_t i = 0; i < state.f.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) {
            log_density[j] -= state.f[i][j];
            slope_sum[j] += state.slope[i][j];
        }
    std::vector<double> density(n);
    for (std::size_t j = 0; j < n; ++j) density[j] = std::exp(log_density[j]);
    const double decay_left = std::max((log_density[1] - log_density[0]) / h, 1e-3);
    const double decay_right = std::max((log_density[n - 2] - log_density[n - 1]) / h, 1e-3);
    const double tail_left = density.front() / decay_left;
    const double tail_right = density.back() / decay_right;

    CompensatedSum num, mass;
    num.add(slope_sum.front() * tail_left);
    num.add(slope_sum.back() * tail_right);
    mass.add(tail_left);
    mass.add(tail_right);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        num.add(0.5 * h * (slope_sum[j] * density[j] + slope_sum[j + 1] * density[j + 1]));
        mass.add(0.5 * h * (density[j] + density[j + 1]));
    }
    return num.value() / mass.value();
}

double transport_mass_identity(const MAProblem& problem, const MAState& state, std::size_t part) {
    if (part >= problem.parts.size()) throw InputError("part index out of range");
    const Interval iv = problem.parts[part];
    const double vi = problem.v[part];
    const auto& s = state.slope[part];
    const double moved = transport_forward(iv, vi, s.back()) - transport_forward(iv, vi, s.front());
    return moved / interval_weighted_volume(iv, vi) + (state.tail_left + state.tail_right) / state.mass;
}

DualPotential legendre_dual(const std::vector<double>& x, const std::vector<double>& f, Interval domain, int points) {
    if (x.size() != f.size() || x.size() < 3) throw InputError("legendre_dual needs matching samples (at least 3)");
    if (points < 2) throw InputError("legendre_dual needs at least two dual nodes");
    if (!(domain.hi > domain.lo)) throw InputError("legendre_dual domain is empty");
    for (std::size_t j = 1; j + 1 < x.size(); ++j) {
        const double second = f[j + 1] - 2 * f[j] + f[j - 1];
        if (second < -1e-10) throw InputError("legendre_dual: samples are not convex at node " + std::to_string(j));
    }
    const double slope_lo = (f[1] - f[0]) / (x[1] - x[0]);
    const double slope_hi = (f.back() - f[f.size() - 2]) / (x.back() - x[x.size() - 2]);
    const double slack = 0.05 * (domain.hi - domain.lo);
    if (slope_lo > domain.lo + slack || slope_hi < domain.hi - slack)
        throw DomainMismatchError("slope range [" + std::to_string(slope_lo) + ", " + std::to_string(slope_hi) +
                                  "] does not cover the interior of [" + std::to_string(domain.lo) + ", " +
                                  std::to_string(domain.hi) + "]");
    DualPotential d;
    d.domain = domain;
    d.p.resize(static_cast<std::size_t>(points));
    d.u.resize(static_cast<std::size_t>(points));
    for (std::size_t k = 0; k < d.p.size(); ++k) {
        const double p = domain.lo + (domain.hi - domain.lo) * static_cast<double>(k) / static_cast<double>(points - 1);
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < x.size(); ++j) best = std::max(best, p * x[j] - f[j]);
        d.p[k] = p;
        d.u[k] = best;
    }
    return d;
}

MAResult solve_continuity_1d(const MAProblem& problem, const ContinuityOptions& options) {
    check_decomposition_1d(problem);
    make_grid(problem.grid);
    const auto& schedule = options.t_schedule;
    if (schedule.empty() || schedule.back() != 1.0) throw ConfigError("t schedule must end at t = 1");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (schedule[i] < 0 || schedule[i] > 1) throw ConfigError("t schedule values must lie in [0, 1]");
        if (i > 0 && schedule[i] < schedule[i - 1]) throw ConfigError("t schedule must be nondecreasing");
    }
    if (options.max_iter < 1) throw ConfigError("max_iter must be positive");

    MAResult result;
    double residual = 0;
    for (std::size_t i = 0; i < problem.parts.size(); ++i) {
        const SimplexD seg{Eigen::VectorXd::Constant(1, problem.parts[i].lo), Eigen::VectorXd::Constant(1, problem.parts[i].hi)};
        const auto m = exp_moments_simplex(seg, Eigen::VectorXd::Constant(1, problem.v[i]), 1);
        residual += m.first[0] / m.mass;
    }
    result.soliton_residual = residual;

    MAState state = initial_state(problem, schedule.front());
    const double escape = problem.grid.R / 2;
    auto finish = [&](MAStatus status, std::string reason) {
        result.status = status;
        result.reason = std::move(reason);
        result.t_reached = state.t;
        result.obstruction_residual = obstruction_residual(state);
        result.w = w_diagnostics(state);
        result.state = std::move(state);
        return result;
    };

    for (const double t : schedule) {
        state.t = t;
        pin_constants(state);
        std::vector<double> history;
        bool done = false;
        int it = 0;
        while (it < options.max_iter) {
            state = ma_step_1d(problem, state, options.relaxation);
            ++it;
            history.push_back(state.update_norm);
            if (state.update_norm < options.tol) {
                done = true;
                break;
            }
            if (std::abs(state.x_w) > escape) {
                result.path.push_back({t, it, state.update_norm, state.x_w, state.mass});
                return finish(MAStatus::Obstructed, "minimizer of w escaped to x = " + std::to_string(state.x_w) +
                                                        " (|x_w| > R/2) at t = " + std::to_string(t));
            }
            const auto window = static_cast<std::size_t>(options.stall_window);
            if (history.size() > window && history.back() > options.stall_ratio * history[history.size() - 1 - window]) {
                result.path.push_back({t, it, state.update_norm, state.x_w, state.mass});
                return finish(MAStatus::Obstructed, "update norm stalled at " + std::to_string(state.update_norm) +
                                                        " at t = " + std::to_string(t));
            }
        }
        result.path.push_back({t, it, state.update_norm, state.x_w, state.mass});
        if (options.on_t_complete) options.on_t_complete(state, it);
        if (!done)
            return finish(MAStatus::Obstructed, "no convergence within " + std::to_string(options.max_iter) +
                                                    " iterations at t = " + std::to_string(t));
    }
    return finish(MAStatus::Converged, "update norm below tolerance at t = 1");
}

}  // namespace torifano
