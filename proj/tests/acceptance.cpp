// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "support.hpp"

#include "torifano/ma_solver.hpp"
#include "torifano/moments.hpp"
#include "torifano/quadrature.hpp"
#include "torifano/stability.hpp"
#include "torifano/triangulation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace torifano;
using namespace testing_support;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Check {
public:
    void require(bool ok, const std::string& what) {
        if (!ok) {
            out_.pass = false;
            if (!failures_.empty()) failures_ += "; ";
            failures_ += what;
        }
    }
    void note(const std::string& s) { notes_ += (notes_.empty() ? "" : ", ") + s; }
    Outcome result() {
        out_.detail = out_.pass ? notes_ : failures_;
        return out_;
    }

private:
    Outcome out_;
    std::string failures_, notes_;
};

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(6);
    s << x;
    return s.str();
}

Polytope pe_part(const Rational& c) { return polytope_from_halfspaces(pe_halfspaces(c), 4); }

Outcome criterion1() {
    Check c;
    for (const char* s : {"3/10", "1/2", "7/10"}) {
        const auto start = std::chrono::steady_clock::now();
        const Rational cc = Q(s);
        const auto mesh = triangulate(pe_part(cc));
        const Rational vol = volume(mesh);
        const QVector b = barycenter(mesh);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        c.require(vol == (56 * cc - 3) / 144, std::string("volume at c=") + s + " is " + to_string(vol));
        c.require(b[3] * vol == (5 * cc - 2) / 720, std::string("first moment y4 at c=") + s + " is " + to_string(b[3] * vol));
        c.require(is_zero(QVector(b.begin(), b.begin() + 3)), std::string("barycenter coords 1-3 nonzero at c=") + s);
        c.require(secs < 2.0, std::string("runtime ") + fmt(secs) + "s at c=" + s);
        c.note(std::string("c=") + s + " vol " + to_string(vol));
    }
    return c.result();
}

QVector pe_sum(const Rational& c) {
    return add(barycenter(triangulate(pe_part(c))), barycenter(triangulate(pe_part(1 - c))));
}

Outcome criterion2() {
    Check c;
    const double cstar = 0.5 + std::sqrt(5.0 / 7.0) / 4.0;
    const Rational cq = rational_from_double(cstar);
    const auto d = Decomposition::from_polytopes({pe_part(cq), pe_part(1 - cq)}, false);
    const auto v = coupled_ke_verdict(d);
    c.require(!v.exact_test, "float mode not used");
    c.require(v.residual_norm < 1e-10, "|sum b| = " + fmt(v.residual_norm) + " at c*");
    const Rational lo = pe_sum(Q("70/100"))[3], hi = pe_sum(Q("72/100"))[3];
    c.require(lo * hi < 0, "no sign change: " + to_string(lo) + ", " + to_string(hi));
    c.note("|sum b(c*)| = " + fmt(v.residual_norm) + ", sum b4 " + fmt(to_double(lo)) + " -> " + fmt(to_double(hi)));
    return c.result();
}

Outcome criterion3() {
    Check c;
    for (const char* s : {"3/10", "1/2", "7/10"}) {
        const auto n = pe_part(Q(s)).redundant_count();
        c.require(n == 0, std::string("c=") + s + " has " + std::to_string(n) + " redundant halfspaces");
    }
    // at c the decomposition is (P'(c), P'(1-c)); redundancy is counted over the pair
    for (const char* s : {"1/5", "4/5"}) {
        const Rational cc = Q(s);
        const auto own = pe_part(cc).redundant_count(), partner = pe_part(1 - cc).redundant_count();
        c.require(own + partner >= 1, std::string("c=") + s + " decomposition has no redundant halfspace");
        c.note(std::string("c=") + s + " redundant " + std::to_string(own) + "+" + std::to_string(partner));
    }
    return c.result();
}

Outcome criterion4() {
    Check c;
    const auto dec = [](const Rational& t) { return Decomposition::from_support(hexagon_fan(), {hexagon_row(t), hexagon_row(-t)}); };
    c.require(is_zero(sum_barycenter(dec(Rational(0)))), "sum b nonzero at t=0");
    const Rational t(1, 10);
    const auto report = validate_decomposition(hexagon_fan(), {hexagon_row(t), hexagon_row(-t)});
    c.require(report.valid && report.row_classes == std::vector<Ampleness>{Ampleness::Ample, Ampleness::Ample},
              "rows not both Ample at t=1/10");
    const auto d = dec(t);
    const QVector b = sum_barycenter(d);
    c.require(!is_zero(b), "sum b zero at t=1/10");
    // hand split: unit square minus corner triangles with legs 1/2 - t and 1/2
    auto part = [](const Rational& s) {
        const Rational lo = Rational(1, 2) - s, hi(1, 2);
        const Rational la = lo * lo / 2, ha = hi * hi / 2;
        const Rational area = 1 - la - ha;
        return (-la * (Rational(-1, 2) + lo / 3) - ha * (Rational(1, 2) - hi / 3)) / area;
    };
    const Rational hand = part(t) + part(-t);
    c.require(b == QVector{hand, hand}, "sum b " + to_string(b[0]) + " differs from hand value " + to_string(hand));
    const auto v = destabilizer(d);
    c.require(v.has_value(), "no destabilizer");
    if (v) {
        const auto df = df_invariant(d, *v);
        c.require(df.df_value < 0, "df = " + to_string(df.df_value));
        c.note("sum b = (" + to_string(b[0]) + ", " + to_string(b[1]) + "), df = " + to_string(df.df_value));
    }
    return c.result();
}

double diagonal_A(double a) {
    const double ep = std::exp(a), em = std::exp(-a);
    const double i0 = (ep - em) / a;
    const double i1 = (ep + em) / a - (ep - em) / (a * a);
    const double i2 = (ep - em) / a - 2 * (ep + em) / (a * a) + 2 * (ep - em) / (a * a * a);
    return (i2 + 2 * i1) / (i1 + 2 * i0);
}

Outcome criterion5() {
    Check c;
    const auto d = Decomposition::from_support(blowup_fan(), {QVector(4, Rational(1))});
    const auto s = solve_soliton(d);
    c.require(s.converged && s.residual_norm < 1e-10, "residual " + fmt(s.residual_norm));
    c.require(s.iterations <= 25, std::to_string(s.iterations) + " iterations");
    c.require(std::abs(s.v[0] - s.v[1]) < 1e-12, "V off the diagonal");
    double lo = -5, hi = -1e-3;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (diagonal_A(mid) > 0 ? hi : lo) = mid;
    }
    const double a = 0.5 * (lo + hi);
    c.require(std::abs(s.v[0] - a) < 1e-8, "bisection gives " + fmt(a) + ", Newton " + fmt(s.v[0]));
    SolitonOptions other;
    other.start = Eigen::Vector2d(3.0, -2.0);
    const auto s2 = solve_soliton(d, other);
    c.require(s2.converged && (s2.v - s.v).norm() < 1e-8, "second start disagrees");
    c.note("V = (" + fmt(s.v[0]) + ", " + fmt(s.v[1]) + ") in " + std::to_string(s.iterations) + " iterations");
    return c.result();
}

QMatrix random_split(std::mt19937_64& rng, const Fan& fan, int spread) {
    std::uniform_int_distribution<int> u(-spread, spread);
    for (;;) {
        QVector a(fan.ray_count());
        for (auto& x : a) x = Rational(1, 2) + Rational(u(rng), 100);
        QVector b(fan.ray_count());
        for (std::size_t j = 0; j < a.size(); ++j) b[j] = 1 - a[j];
        QMatrix m{a, b};
        if (validate_decomposition(fan, m).valid) return m;
    }
}

Outcome criterion6() {
    Check c;
    std::mt19937_64 rng(2024);
    int runs = 0;
    for (int k = 0; k < 20; ++k) {
        const Fan fan = k % 2 ? hexagon_fan() : p2_fan();
        const auto d = Decomposition::from_support(fan, random_split(rng, fan, k % 2 ? 9 : 40));
        const QVector t{random_rational(rng, 9, 7), random_rational(rng, 9, 7)};
        const auto moved = d.translated({t, scale(t, Rational(-1))});
        const QVector probe{random_rational(rng, 5, 4), random_rational(rng, 5, 4)};
        c.require(sum_barycenter(moved) == sum_barycenter(d), "sum b changed in trial " + std::to_string(k));
        c.require(df_invariant(moved, probe).df_value == df_invariant(d, probe).df_value, "df changed in trial " + std::to_string(k));
        const auto v0 = solve_soliton(d), v1 = solve_soliton(moved);
        c.require(v0.converged && v1.converged && (v0.v - v1.v).norm() < 1e-10, "V changed in trial " + std::to_string(k));
        ++runs;
    }
    c.note(std::to_string(runs) + " translations");
    return c.result();
}

Outcome criterion7() {
    Check c;
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> pick(0, 2);
    int runs = 0;
    for (int k = 0; k < 20; ++k) {
        Polytope p;
        const int which = pick(rng);
        if (which == 0) {
            p = interval(Rational(-1) + random_rational(rng, 3, 5) / 4, Rational(1) + random_rational(rng, 3, 5) / 4);
        } else {
            const Fan fan = which == 1 ? p2_fan() : hexagon_fan();
            p = polytope_from_support(fan, random_split(rng, fan, which == 1 ? 40 : 9)[0]);
        }
        QVector v;
        for (int i = 0; i < p.dimension; ++i) v.push_back(random_rational(rng, 7, 3));
        Rational cap = -dot(v, p.vertices.front());
        for (const auto& x : p.vertices) cap = std::max(cap, Rational(-dot(v, x)));
        cap += Rational(1) + abs(random_rational(rng, 5, 4));
        const auto lc = lifted_config(p, v, cap);
        const auto base = triangulate(p);
        const Rational predicted = volume(base) * (cap + dot(v, barycenter(base)));
        const Rational lifted = volume(triangulate(lc.lifted));
        c.require(lc.lifted.dimension == p.dimension + 1, "lift has wrong dimension");
        c.require(lifted == predicted, "trial " + std::to_string(k) + ": " + to_string(lifted) + " vs " + to_string(predicted));
        ++runs;
    }
    c.note(std::to_string(runs) + " exact identities");
    return c.result();
}

Outcome criterion8() {
    Check c;
    std::mt19937_64 rng(88);
    std::uniform_real_distribution<double> pt(-1, 1), vd(-10, 10);
    double worst = 0;
    for (int k = 0; k < 50; ++k) {
        const int n = 1 + k % 4;
        SimplexD s;
        for (int i = 0; i <= n; ++i) {
            Eigen::VectorXd x(n);
            for (int j = 0; j < n; ++j) x[j] = pt(rng);
            s.push_back(x);
        }
        Eigen::VectorXd v(n);
        for (int j = 0; j < n; ++j) v[j] = vd(rng);
        const auto dd = exp_moments_simplex(s, v, 2);
        const auto qd = quadrature::exp_moments(s, v, 2);
        const double scale = std::abs(qd.mass);
        worst = std::max({worst, std::abs(dd.mass - qd.mass) / scale, (dd.first - qd.first).norm() / scale,
                          (dd.second - qd.second).norm() / scale});
    }
    c.require(worst < 1e-9, "worst relative difference " + fmt(worst));

    const auto mesh = triangulate(pe_part(Q("1/2")));
    Eigen::VectorXd v(4);
    v << 0.7, -1.3, 0.4, 2.1;
    const auto cov = weighted_covariance(mesh, v);
    double jac = 0;
    const double step = 1e-5;
    for (int j = 0; j < 4; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(4);
        e[j] = step;
        const Eigen::VectorXd col = (weighted_barycenter(mesh, v + e) - weighted_barycenter(mesh, v - e)) / (2 * step);
        jac = std::max(jac, (col - cov.col(j)).cwiseAbs().maxCoeff());
    }
    c.require(jac < 1e-6, "Jacobian mismatch " + fmt(jac));
    c.note("kernel " + fmt(worst) + ", Jacobian " + fmt(jac));
    return c.result();
}

Outcome criterion9() {
    Check c;
    const MAProblem fs{{{-1, 1}}, {0.0}, {8.0, 1.0 / 250}};
    const auto r1 = solve_continuity_1d(fs);
    double err = 0;
    for (std::size_t j = 0; j < r1.state.x.size(); ++j) {
        const double x = r1.state.x[j];
        err = std::max(err, std::abs(r1.state.f[0][j] - (2 * std::log(std::cosh(x / 2)) + std::log(4.0))));
    }
    c.require(r1.status == MAStatus::Converged, "Fubini-Study case: " + r1.reason);
    c.require(err < 1e-4, "Fubini-Study sup error " + fmt(err));
    c.require(std::abs(r1.obstruction_residual) < 1e-6, "obstruction residual " + fmt(r1.obstruction_residual));

    const MAProblem sym{{{-0.75, 0.25}, {-0.25, 0.75}}, {0.0, 0.0}, {8.0, 1.0 / 250}};
    const auto r2 = solve_continuity_1d(sym);
    const auto& f = r2.state.f;
    const std::size_t n = r2.state.x.size();
    double mirror = 0;
    for (std::size_t j = 0; j < n; ++j) mirror = std::max(mirror, std::abs(f[1][j] - f[0][n - 1 - j]));
    c.require(r2.status == MAStatus::Converged, "symmetric case: " + r2.reason);
    c.require(mirror < 1e-6, "mirror error " + fmt(mirror));
    c.require(std::abs(r2.obstruction_residual) < 1e-6, "obstruction residual " + fmt(r2.obstruction_residual));

    const MAProblem tilt{{{-0.75, 0.25}, {-0.25, 0.75}}, {2.0, 0.0}, {8.0, 1.0 / 250}};
    const auto r3 = solve_continuity_1d(tilt);
    const double closed = interval_A(-0.75, 0.25, 2.0) + interval_A(-0.25, 0.75, 0.0);
    c.require(r3.status == MAStatus::Obstructed, "V=(2,0) not obstructed");
    c.require(std::abs(r3.soliton_residual - closed) < 1e-12 && std::abs(closed - 0.156518) < 1e-6,
              "reported residual " + fmt(r3.soliton_residual));
    c.note("FS error " + fmt(err) + ", mirror " + fmt(mirror) + ", V=(2,0) residual " + fmt(r3.soliton_residual));
    return c.result();
}

Outcome criterion10() {
    Check c;
    c.note("metric existence itself is not computable; substitutes are criteria 1-9");
    return c.result();
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"1 exact moments of P'(c)", criterion1},
        {"2 decomposition root c*", criterion2},
        {"3 redundancy of P'(c)", criterion3},
        {"4 hexagon barycenter sum", criterion4},
        {"5 soliton Newton on the blowup", criterion5},
        {"6 translation invariance", criterion6},
        {"7 lifted volume identity", criterion7},
        {"8 weighted-moment kernel", criterion8},
        {"9 one-dimensional Monge-Ampere", criterion9},
        {"10 substitutes for metric existence", criterion10},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
