#include "torifano/moments.hpp"

#include "torifano/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace torifano {

Rational volume(const SimplexMesh& mesh) {
    Rational total = 0;
    for (const auto& s : mesh.simplices) total += simplex_volume(s);
    return total;
}

QVector barycenter(const SimplexMesh& mesh) {
    const auto n = static_cast<std::size_t>(mesh.dimension);
    QVector acc(n, Rational(0));
    Rational total = 0;
    for (const auto& s : mesh.simplices) {
        const Rational vol = simplex_volume(s);
        for (const auto& v : s)
            for (std::size_t i = 0; i < n; ++i) acc[i] += vol * v[i];
        total += vol;
    }
    if (total == 0) throw DegenerateError("barycenter of a zero-volume mesh");
    return scale(acc, 1 / (total * static_cast<long long>(n + 1)));
}

namespace {

// exp[x_0..x_m] = e^c * sum_k h_k(x - c) / (m+k)!, h_k complete homogeneous.
double exp_dd_series(std::span<const double> x) {
    const std::size_t m = x.size() - 1;
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    const double c = 0.5 * (*lo + *hi);
    const double r = 0.5 * (*hi - *lo);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - c;

    double inv_fact = 1.0;  // 1/(m+k)!
    for (std::size_t i = 2; i <= m; ++i) inv_fact /= static_cast<double>(i);
    std::vector<double> h(x.size(), 1.0);  // h_k(y_0..y_i), starting at k = 0
    double sum = inv_fact;
    double bound = inv_fact;  // C(m+k,k) r^k / (m+k)!, dominates |term|
    for (std::size_t k = 1; k < 200; ++k) {
        double running = 0.0;
        for (std::size_t i = 0; i < h.size(); ++i) {
            running += y[i] * h[i];
            h[i] = running;
        }
        inv_fact /= static_cast<double>(m + k);
        sum += h[m] * inv_fact;
        bound *= r / static_cast<double>(k);
        if (bound < 1e-18 * std::abs(sum)) break;
    }
    return std::exp(c) * sum;
}

class DividedDifference {
public:
    explicit DividedDifference(std::span<const double> nodes) : x_(nodes.begin(), nodes.end()) {
        std::sort(x_.begin(), x_.end());
        const std::size_t m = x_.size();
        memo_.assign(m * m, std::numeric_limits<double>::quiet_NaN());
    }

    double operator()() { return eval(0, x_.size() - 1); }

private:
    double eval(std::size_t i, std::size_t j) {
        double& slot = memo_[i * x_.size() + j];
        if (!std::isnan(slot)) return slot;
        const double spread = x_[j] - x_[i];
        if (i == j)
            slot = std::exp(x_[i]);
        else if (spread < kSeriesSpread)
            slot = exp_dd_series(std::span<const double>(x_).subspan(i, j - i + 1));
        else
            slot = (eval(i + 1, j) - eval(i, j - 1)) / spread;
        return slot;
    }

    std::vector<double> x_;
    std::vector<double> memo_;
};

double simplex_scale(const Simplex& s) {
    // n! * Vol
    const std::size_t n = s.size() - 1;
    QMatrix m;
    for (std::size_t i = 1; i <= n; ++i) m.push_back(subtract(s[i], s[0]));
    return to_double(abs(determinant(std::move(m))));
}

double simplex_scale(const SimplexD& s) {
    const auto n = static_cast<Eigen::Index>(s.size() - 1);
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m.col(i) = s[static_cast<std::size_t>(i) + 1] - s[0];
    return std::abs(m.determinant());
}

ExpMoments moments_with_scale(const SimplexD& simplex, const Eigen::VectorXd& v, int order, double scale) {
    const std::size_t nv = simplex.size();
    std::vector<double> a(nv);
    for (std::size_t j = 0; j < nv; ++j) {
        a[j] = v.dot(simplex[j]);
        if (!(std::abs(a[j]) <= kExponentGuard))
            throw RangeError("exponent " + std::to_string(a[j]) + " outside the overflow guard");
    }
    const auto n = simplex.front().size();
    ExpMoments out;
    out.mass = scale * exp_divided_difference(a);
    if (order < 1) return out;

    std::vector<double> nodes(a);
    nodes.push_back(0.0);
    std::vector<double> lambda1(nv);  // integral of lambda_j e^{...}, without scale
    for (std::size_t j = 0; j < nv; ++j) {
        nodes.back() = a[j];
        lambda1[j] = exp_divided_difference(nodes);
    }
    out.first = Eigen::VectorXd::Zero(n);
    for (std::size_t j = 0; j < nv; ++j) out.first += scale * lambda1[j] * simplex[j];
    if (order < 2) return out;

    nodes.push_back(0.0);
    out.second = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t j = 0; j < nv; ++j) {
        for (std::size_t k = j; k < nv; ++k) {
            nodes[nv] = a[j];
            nodes[nv + 1] = a[k];
            // d^2/da_j da_k of exp[a]; a repeated node differentiates with a factor 2
            const double w = scale * exp_divided_difference(nodes) * (j == k ? 2.0 : 1.0);
            if (j == k)
                out.second += w * simplex[j] * simplex[j].transpose();
            else
                out.second += w * (simplex[j] * simplex[k].transpose() + simplex[k] * simplex[j].transpose());
        }
    }
    return out;
}

}  // namespace

double exp_divided_difference(std::span<const double> nodes) {
    if (nodes.empty()) throw InputError("divided difference of no nodes");
    DividedDifference dd(nodes);
    return dd();
}

SimplexD to_double_simplex(const Simplex& s) {
    SimplexD out;
    out.reserve(s.size());
    for (const auto& v : s) {
        Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) x[static_cast<Eigen::Index>(i)] = to_double(v[i]);
        out.push_back(std::move(x));
    }
    return out;
}

double exp_integral_simplex(const SimplexD& simplex, const Eigen::VectorXd& v) {
    return moments_with_scale(simplex, v, 0, simplex_scale(simplex)).mass;
}

ExpMoments exp_moments_simplex(const SimplexD& simplex, const Eigen::VectorXd& v, int order) {
    return moments_with_scale(simplex, v, order, simplex_scale(simplex));
}

WeightedMoments weighted_moments(const SimplexMesh& mesh, const Eigen::VectorXd& v, int order) {
    const auto n = static_cast<Eigen::Index>(mesh.dimension);
    if (v.size() != n) throw InputError("vector field has wrong dimension");
    if (!v.allFinite()) throw InputError("vector field has non-finite entries");
    const QVector center = barycenter(mesh);
    Eigen::VectorXd center_d(n);
    for (Eigen::Index i = 0; i < n; ++i) center_d[i] = to_double(center[static_cast<std::size_t>(i)]);

    CompensatedSum mass;
    std::vector<CompensatedSum> first(static_cast<std::size_t>(n));
    std::vector<CompensatedSum> second(static_cast<std::size_t>(n * n));
    for (const auto& s : mesh.simplices) {
        Simplex shifted;
        shifted.reserve(s.size());
        for (const auto& vert : s) shifted.push_back(subtract(vert, center));
        const SimplexD sd = to_double_simplex(shifted);
        const auto m = moments_with_scale(sd, v, order, simplex_scale(s));
        mass.add(m.mass);
        if (order >= 1)
            for (Eigen::Index i = 0; i < n; ++i) first[static_cast<std::size_t>(i)].add(m.first[i]);
        if (order >= 2)
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) second[static_cast<std::size_t>(i * n + j)].add(m.second(i, j));
    }

    WeightedMoments out;
    const double z = mass.value();
    const double shift = v.dot(center_d);
    out.log_volume = shift + std::log(z);
    out.volume = std::exp(out.log_volume);
    const double eps = std::numeric_limits<double>::epsilon();
    out.err_estimate = 64.0 * eps * static_cast<double>(n + 3) * mass.abs_total() / z +
                       eps * static_cast<double>(mesh.simplices.size());
    out.barycenter = center_d;
    if (order >= 1) {
        Eigen::VectorXd mean(n);
        for (Eigen::Index i = 0; i < n; ++i) mean[i] = first[static_cast<std::size_t>(i)].value() / z;
        out.barycenter = center_d + mean;
        if (order >= 2) {
            Eigen::MatrixXd cov(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) cov(i, j) = second[static_cast<std::size_t>(i * n + j)].value() / z;
            cov -= mean * mean.transpose();
            out.covariance = 0.5 * (cov + cov.transpose());
        }
    }
    return out;
}

double weighted_volume(const SimplexMesh& mesh, const Eigen::VectorXd& v) {
    return weighted_moments(mesh, v, 0).volume;
}

Eigen::VectorXd weighted_barycenter(const SimplexMesh& mesh, const Eigen::VectorXd& v) {
    return weighted_moments(mesh, v, 1).barycenter;
}

Eigen::MatrixXd weighted_covariance(const SimplexMesh& mesh, const Eigen::VectorXd& v) {
    return weighted_moments(mesh, v, 2).covariance;
}

MomentReport moment_report(const SimplexMesh& mesh, const Eigen::VectorXd& v) {
    MomentReport r;
    r.volume = volume(mesh);
    r.barycenter = barycenter(mesh);
    r.vfield = v;
    const auto w = weighted_moments(mesh, v, 2);
    r.weighted_volume = w.volume;
    r.weighted_barycenter = w.barycenter;
    r.covariance = w.covariance;
    r.err_estimate = w.err_estimate;
    return r;
}

}  // namespace torifano
