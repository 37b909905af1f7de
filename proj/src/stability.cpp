#include "torifano/stability.hpp"

#include "torifano/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace torifano {

DecompositionReport validate_decomposition(const Fan& fan, const QMatrix& support_matrix) {
    check_fan_input(fan);
    if (support_matrix.empty()) throw InputError("decomposition has no rows");
    const std::size_t m = fan.ray_count();
    for (std::size_t i = 0; i < support_matrix.size(); ++i)
        if (support_matrix[i].size() != m)
            throw InputError("decomposition row " + std::to_string(i) + " has " + std::to_string(support_matrix[i].size()) +
                             " entries, fan has " + std::to_string(m) + " rays");

    DecompositionReport report;
    for (std::size_t i = 0; i < support_matrix.size(); ++i) {
        const auto amp = ampleness_class(fan, support_matrix[i]);
        report.row_classes.push_back(amp.kind);
        if (amp.kind != Ampleness::Ample)
            report.failures.push_back("row " + std::to_string(i) + " is " + to_string(amp.kind) + ": " + amp.witness);
    }
    for (std::size_t j = 0; j < m; ++j) {
        Rational col = 0;
        for (const auto& row : support_matrix) col += row[j];
        if (col != 1) report.failures.push_back("column " + std::to_string(j) + " sums to " + to_string(col));
    }
    report.valid = report.failures.empty();
    return report;
}

namespace {

std::string joined(const std::vector<std::string>& items) {
    std::string s;
    for (const auto& it : items) s += (s.empty() ? "" : "; ") + it;
    return s;
}

}  // namespace

Decomposition Decomposition::from_support(Fan fan, QMatrix support_matrix, bool exact) {
    const auto fan_report = validate_fan(fan);
    if (!fan_report.smooth || !fan_report.complete)
        throw InputError("fan must be smooth and complete: " + joined(fan_report.witnesses));
    const auto report = validate_decomposition(fan, support_matrix);
    if (!report.valid) throw InputError("invalid decomposition: " + joined(report.failures));
    Decomposition d;
    for (const auto& row : support_matrix) d.parts_.push_back(polytope_from_support(fan, row));
    d.fan_ = std::move(fan);
    d.support_ = std::move(support_matrix);
    d.exact_ = exact;
    d.build_meshes();
    return d;
}

Decomposition Decomposition::from_polytopes(std::vector<Polytope> parts, bool exact) {
    if (parts.empty()) throw InputError("decomposition has no parts");
    const auto& first = parts.front();
    std::vector<std::string> failures;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto& p = parts[i];
        if (p.dimension != first.dimension || p.halfspaces.size() != first.halfspaces.size())
            throw InputError("part " + std::to_string(i) + " does not match the shape of part 0");
        for (std::size_t j = 0; j < p.halfspaces.size(); ++j)
            if (p.halfspaces[j].normal != first.halfspaces[j].normal)
                throw InputError("part " + std::to_string(i) + " halfspace " + std::to_string(j) +
                                 " has a different normal than part 0");
        for (std::size_t j = 0; j < p.halfspaces.size(); ++j)
            if (p.redundant[j]) failures.push_back("part " + std::to_string(i) + " halfspace " + std::to_string(j) + " is redundant");
    }
    for (std::size_t j = 0; j < first.halfspaces.size(); ++j) {
        Rational col = 0;
        for (const auto& p : parts) col += p.halfspaces[j].offset;
        if (col != 1) failures.push_back("column " + std::to_string(j) + " sums to " + to_string(col));
    }
    if (!failures.empty()) throw InputError("invalid decomposition: " + joined(failures));

    Decomposition d;
    for (const auto& p : parts) {
        QVector row;
        for (const auto& h : p.halfspaces) row.push_back(h.offset);
        d.support_.push_back(std::move(row));
    }
    d.parts_ = std::move(parts);
    d.exact_ = exact;
    d.build_meshes();
    return d;
}

void Decomposition::build_meshes() {
    meshes_.clear();
    for (const auto& p : parts_) meshes_.push_back(triangulate(p));
}

Decomposition Decomposition::translated(const std::vector<QVector>& shifts) const {
    if (shifts.size() != parts_.size()) throw InputError("one translation per part required");
    QVector total(static_cast<std::size_t>(dimension()), Rational(0));
    for (const auto& t : shifts) total = add(total, t);
    if (!is_zero(total)) throw InputError("translations must sum to zero");
    Decomposition d = *this;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        d.parts_[i] = translate(parts_[i], shifts[i]);
        for (std::size_t j = 0; j < d.parts_[i].halfspaces.size(); ++j) d.support_[i][j] = d.parts_[i].halfspaces[j].offset;
    }
    d.build_meshes();
    return d;
}

QVector sum_barycenter(const Decomposition& d) {
    QVector total(static_cast<std::size_t>(d.dimension()), Rational(0));
    for (const auto& mesh : d.meshes()) total = add(total, barycenter(mesh));
    return total;
}

KEVerdict coupled_ke_verdict(const Decomposition& d, double tol) {
    KEVerdict v;
    v.barycenter_sum = sum_barycenter(d);
    v.exact_test = d.exact();
    v.tolerance = tol;
    for (const auto& q : v.barycenter_sum) v.residual_norm = std::max(v.residual_norm, std::abs(to_double(q)));
    v.exists = v.exact_test ? is_zero(v.barycenter_sum) : v.residual_norm < tol;
    if (!v.exists) v.destabilizer = scale(v.barycenter_sum, Rational(-1));
    return v;
}

Eigen::VectorXd soliton_residual(const Decomposition& d, const std::vector<Eigen::VectorXd>& vs) {
    if (vs.size() != d.size())
        throw InputError("soliton_residual needs " + std::to_string(d.size()) + " vector fields, got " + std::to_string(vs.size()));
    Eigen::VectorXd total = Eigen::VectorXd::Zero(d.dimension());
    for (std::size_t i = 0; i < d.size(); ++i) total += weighted_barycenter(d.meshes()[i], vs[i]);
    return total;
}

namespace {

struct Objective {
    double value = 0;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
    std::vector<Eigen::VectorXd> parts;
};

Objective evaluate(const Decomposition& d, const Eigen::VectorXd& v, int order) {
    Objective obj;
    const auto n = d.dimension();
    obj.gradient = Eigen::VectorXd::Zero(n);
    obj.hessian = Eigen::MatrixXd::Zero(n, n);
    for (const auto& mesh : d.meshes()) {
        const auto w = weighted_moments(mesh, v, order);
        obj.value += w.log_volume;
        if (order >= 1) {
            obj.gradient += w.barycenter;
            obj.parts.push_back(w.barycenter);
        }
        if (order >= 2) obj.hessian += w.covariance;
    }
    return obj;
}

}  // namespace

SolitonSolution solve_soliton(const Decomposition& d, const SolitonOptions& options) {
    const auto n = d.dimension();
    Eigen::VectorXd v = options.start.value_or(Eigen::VectorXd::Zero(n));
    if (v.size() != n) throw InputError("starting vector field has wrong dimension");

    SolitonSolution best;
    best.residual_norm = std::numeric_limits<double>::infinity();
    best.min_hessian_eigenvalue = std::numeric_limits<double>::infinity();
    double min_eig_seen = std::numeric_limits<double>::infinity();

    for (int iter = 1; iter <= options.max_iter; ++iter) {
        const Objective obj = evaluate(d, v, 2);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(obj.hessian);
        const double lo = eig.eigenvalues().minCoeff();
        const double hi = eig.eigenvalues().maxCoeff();
        if (!(lo > 0)) throw SingularHessianError("Hessian of the log-partition objective is not positive definite");
        min_eig_seen = std::min(min_eig_seen, lo);

        const double res = obj.gradient.norm();
        if (res < best.residual_norm) {
            best.v = v;
            best.residual_norm = res;
            best.iterations = iter;
            best.hessian_condition = hi / lo;
            best.per_polytope_A = obj.parts;
        }
        best.min_hessian_eigenvalue = min_eig_seen;
        if (res <= options.tol) {
            best.converged = true;
            best.iterations = iter;
            return best;
        }

        const Eigen::VectorXd step = -obj.hessian.ldlt().solve(obj.gradient);
        const double slope = obj.gradient.dot(step);
        double t = 1.0;
        // objective values carry roundoff of order eps*|F|
        const double slack = 1e-13 * std::max(1.0, std::abs(obj.value));
        while (t > 1e-12) {
            const double trial = evaluate(d, v + t * step, 0).value;
            if (trial <= obj.value + 1e-4 * t * slope + slack) break;
            t *= 0.5;
        }
        v += t * step;
    }
    best.iterations = options.max_iter;
    best.converged = false;
    return best;
}

DFReport df_invariant(const Decomposition& d, const QVector& v) {
    if (v.size() != static_cast<std::size_t>(d.dimension())) throw InputError("vector field has wrong dimension");
    DFReport r;
    r.v = v;
    r.barycenter_sum = sum_barycenter(d);
    r.df_value = dot(v, r.barycenter_sum);
    r.destabilizing = r.df_value < 0;
    return r;
}

double df_invariant(const Decomposition& d, const Eigen::VectorXd& v) {
    if (v.size() != d.dimension()) throw InputError("vector field has wrong dimension");
    const auto b = to_doubles(sum_barycenter(d));
    return v.dot(Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size())));
}

std::optional<QVector> destabilizer(const Decomposition& d) {
    const auto b = sum_barycenter(d);
    if (is_zero(b)) return std::nullopt;
    return scale(b, Rational(-1));
}

LiftedConfig lifted_config(const Polytope& base, const QVector& v, const Rational& cap) {
    const auto n = static_cast<std::size_t>(base.dimension);
    if (v.size() != n) throw InputError("vector field has wrong dimension");
    Rational floor_max = -dot(v, base.vertices.front()), floor_min = floor_max;
    for (const auto& p : base.vertices) {
        floor_max = std::max(floor_max, Rational(-dot(v, p)));
        floor_min = std::min(floor_min, Rational(-dot(v, p)));
    }
    // the slab may pinch to zero height on a face, as long as the lift stays full-dimensional
    if (cap < floor_max || !(cap > floor_min))
        throw DegenerateLiftError("cap " + to_string(cap) + " must be at least " + to_string(floor_max) +
                                  " (max of -<v, vertex>) and leave a full-dimensional slab");

    LiftedConfig out;
    out.base = base;
    out.v = v;
    out.cap = cap;
    Polytope& lifted = out.lifted;
    lifted.dimension = base.dimension + 1;
    lifted.provenance = Provenance::Lifted;
    for (const auto& h : base.halfspaces) {
        QVector normal = h.normal;
        normal.push_back(0);
        lifted.halfspaces.push_back({std::move(normal), h.offset});
    }
    QVector floor_normal = v;
    floor_normal.push_back(1);
    lifted.halfspaces.push_back({std::move(floor_normal), Rational(0)});
    QVector cap_normal(n + 1, Rational(0));
    cap_normal[n] = -1;
    lifted.halfspaces.push_back({std::move(cap_normal), cap});
    for (const auto& p : base.vertices) {
        QVector low = p, high = p;
        low.push_back(-dot(v, p));
        high.push_back(cap);
        lifted.vertices.push_back(std::move(low));
        lifted.vertices.push_back(std::move(high));
    }
    finalize_polytope(lifted);

    out.lifted_volume = volume(triangulate(lifted));
    const auto base_mesh = triangulate(base);
    out.predicted_volume = volume(base_mesh) * (cap + dot(v, barycenter(base_mesh)));
    out.identity_holds = out.lifted_volume == out.predicted_volume;
    return out;
}

}  // namespace torifano
