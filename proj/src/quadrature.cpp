#include "torifano/quadrature.hpp"

#include "torifano/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace torifano::quadrature {

namespace {

// P_q(x) and P_q'(x) by the three-term recurrence
std::pair<double, double> legendre(std::size_t q, double x) {
    double p0 = 1, p1 = x;
    for (std::size_t k = 2; k <= q; ++k) {
        const auto kd = static_cast<double>(k);
        const double p2 = ((2 * kd - 1) * x * p1 - (kd - 1) * p0) / kd;
        p0 = p1;
        p1 = p2;
    }
    const double dp = static_cast<double>(q) * (x * p1 - p0) / (x * x - 1);
    return {p1, dp};
}

}  // namespace

GaussRule gauss_legendre(int points) {
    if (points < 1) throw InputError("gauss_legendre needs at least one point");
    const auto q = static_cast<std::size_t>(points);
    GaussRule rule;
    rule.nodes.resize(q);
    rule.weights.resize(q);
    if (q == 1) {
        rule.nodes[0] = 0.5;
        rule.weights[0] = 1.0;
        return rule;
    }
    for (std::size_t i = 0; i < (q + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(q) + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = legendre(q, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double dp = legendre(q, x).second;
        const double w = 2.0 / ((1 - x * x) * dp * dp);
        rule.nodes[i] = 0.5 * (1 - x);
        rule.nodes[q - 1 - i] = 0.5 * (1 + x);
        rule.weights[i] = rule.weights[q - 1 - i] = 0.5 * w;
    }
    return rule;
}

double integrate(const SimplexD& simplex, const std::function<double(const Eigen::VectorXd&)>& f, int points) {
    const std::size_t n = simplex.size() - 1;
    const auto rule = gauss_legendre(points);
    const auto q = rule.nodes.size();
    Eigen::MatrixXd edges(simplex[0].size(), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) edges.col(static_cast<Eigen::Index>(i)) = simplex[i + 1] - simplex[0];
    const double jac = n == 0 ? 1.0 : std::abs(edges.determinant());

    std::vector<std::size_t> idx(n, 0);
    CompensatedSum total;
    Eigen::VectorXd lambda(static_cast<Eigen::Index>(n));
    while (true) {
        // Duffy map from the unit cube onto the standard simplex; the
        // Jacobian picks up the remaining length before each coordinate
        double remaining = 1.0;
        double weight = jac;
        for (std::size_t d = 0; d < n; ++d) {
            const double u = rule.nodes[idx[d]];
            lambda[static_cast<Eigen::Index>(d)] = remaining * u;
            weight *= rule.weights[idx[d]] * remaining;
            remaining *= (1 - u);
        }
        const Eigen::VectorXd x = simplex[0] + edges * lambda;
        total.add(weight * f(x));

        std::size_t d = 0;
        while (d < n && ++idx[d] == q) idx[d++] = 0;
        if (d == n) break;
    }
    return total.value();
}

int adaptive_points(const SimplexD& simplex, const Eigen::VectorXd& v) {
    double lo = v.dot(simplex[0]), hi = lo;
    for (const auto& x : simplex) {
        lo = std::min(lo, v.dot(x));
        hi = std::max(hi, v.dot(x));
    }
    const double spread = hi - lo;
    const auto n = static_cast<double>(simplex.size() - 1);
    // polynomial degree d with (spread/4)^(d+1)/(d+1)! below double precision
    const int degree = static_cast<int>(std::ceil(0.7 * spread + 24.0));
    return std::max(4, static_cast<int>(std::ceil((degree + n + 2.0) / 2.0)) + 1);
}

ExpMoments exp_moments(const SimplexD& simplex, const Eigen::VectorXd& v, int order) {
    const int pts = adaptive_points(simplex, v);
    const auto n = simplex.front().size();
    ExpMoments out;
    out.mass = integrate(simplex, [&](const Eigen::VectorXd& x) { return std::exp(v.dot(x)); }, pts);
    if (order >= 1) {
        out.first = Eigen::VectorXd::Zero(n);
        for (Eigen::Index i = 0; i < n; ++i)
            out.first[i] = integrate(simplex, [&](const Eigen::VectorXd& x) { return x[i] * std::exp(v.dot(x)); }, pts);
    }
    if (order >= 2) {
        out.second = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i; j < n; ++j) {
                out.second(i, j) = integrate(
                    simplex, [&](const Eigen::VectorXd& x) { return x[i] * x[j] * std::exp(v.dot(x)); }, pts);
                out.second(j, i) = out.second(i, j);
            }
    }
    return out;
}

}  // namespace torifano::quadrature
