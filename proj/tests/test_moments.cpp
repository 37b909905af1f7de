#include "support.hpp"

#include "torifano/errors.hpp"
#include "torifano/moments.hpp"
#include "torifano/quadrature.hpp"
#include "torifano/triangulation.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include <numbers>

using namespace torifano;
using namespace testing_support;

namespace {

using Big = boost::multiprecision::cpp_bin_float_100;

// exp[x_0..x_m] = sum_k h_k(x) / (m+k)!, uncentered, in 100-digit arithmetic
double dd_oracle(const std::vector<double>& nodes) {
    const std::size_t m = nodes.size() - 1;
    const int terms = 400;
    std::vector<Big> h(static_cast<std::size_t>(terms), Big(0));
    h[0] = 1;
    for (const double x : nodes) {
        const Big bx(x);
        for (std::size_t k = 1; k < h.size(); ++k) h[k] += bx * h[k - 1];
    }
    Big fact = 1;
    for (std::size_t i = 2; i <= m; ++i) fact *= i;
    Big total = 0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        if (k > 0) fact *= (m + k);
        total += h[k] / fact;
    }
    return static_cast<double>(total);
}

SimplexD random_simplex(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SimplexD s;
    for (int i = 0; i <= n; ++i) {
        Eigen::VectorXd v(n);
        for (int k = 0; k < n; ++k) v[k] = u(rng);
        s.push_back(v);
    }
    return s;
}

Eigen::MatrixXd quadrature_covariance(const SimplexMesh& mesh, const Eigen::VectorXd& v) {
    const auto n = mesh.dimension;
    double mass = 0;
    Eigen::VectorXd first = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(n, n);
    for (const auto& s : mesh.simplices) {
        const auto m = quadrature::exp_moments(to_double_simplex(s), v, 2);
        mass += m.mass;
        first += m.first;
        second += m.second;
    }
    const Eigen::VectorXd a = first / mass;
    return second / mass - a * a.transpose();
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

// ---- exact moments ----

TEST(ExactMoments, Volumes) {
    EXPECT_EQ(volume(triangulate(polytope_from_support(p2_fan(), QV({"1", "1", "1"})))), Q("9/2"));
    EXPECT_EQ(volume(triangulate(polytope_from_support(hexagon_fan(), QVector(6, Rational(1))))), 3);
    EXPECT_EQ(volume(triangulate(polytope_from_halfspaces(pe_halfspaces(Q("1/2")), 4))), Q("25/144"));
}

TEST(ExactMoments, Barycenters) {
    EXPECT_EQ(barycenter(triangulate(polytope_from_support(hexagon_fan(), QVector(6, Rational(1))))), QV({"0", "0"}));
    const auto quad = polytope_from_support(blowup_fan(), QV({"1", "1", "1", "1"}));
    EXPECT_EQ(quad.vertices,
              (std::vector<QVector>{QV({"-1", "0"}), QV({"-1", "2"}), QV({"0", "-1"}), QV({"2", "-1"})}));
    EXPECT_EQ(barycenter(triangulate(quad)), QV({"1/12", "1/12"}));
    // hand split along (-1,0)-(2,-1): area 1 with centroid (1/3,-2/3), area 3 with centroid (0,1/3)
    const QVector hand = scale(add(scale(QV({"1/3", "-2/3"}), Q("1")), scale(QV({"0", "1/3"}), Q("3"))), Q("1/4"));
    EXPECT_EQ(hand, QV({"1/12", "1/12"}));
    const auto pe = barycenter(triangulate(polytope_from_halfspaces(pe_halfspaces(Q("1/2")), 4)));
    EXPECT_EQ(pe, QV({"0", "0", "0", "1/250"}));
}

TEST(ExactMoments, MeshIndependenceUnderReflection) {
    // reflecting changes the lexicographic order and hence the triangulation
    const auto p = polytope_from_support(blowup_fan(), QV({"1", "1", "1", "1"}));
    std::vector<Halfspace> flipped;
    for (const auto& h : p.halfspaces) flipped.push_back({scale(h.normal, Rational(-1)), h.offset});
    const auto q = polytope_from_halfspaces(flipped, 2);
    EXPECT_EQ(volume(triangulate(q)), volume(triangulate(p)));
    EXPECT_EQ(barycenter(triangulate(q)), scale(barycenter(triangulate(p)), Rational(-1)));

    const Eigen::Vector2d v(0.7, -1.3);
    const auto a = weighted_barycenter(triangulate(p), v);
    const auto b = weighted_barycenter(triangulate(q), -v);
    EXPECT_NEAR((a + b).norm(), 0.0, 1e-12);
}

// ---- divided differences ----

TEST(DividedDifference, DistinctRepeatedAndClusteredNodes) {
    const std::vector<std::vector<double>> cases{
        {0.0},
        {0.0, 1.0},
        {-3.0, 0.5, 2.0, 7.5},
        {1.0, 1.0, 1.0},
        {0.2, 0.2 + 1e-9, 0.2 + 2e-9},
        {0.0, 0.0, 0.0, 0.3, 0.3, 0.3},
        {-9.0, -8.9, 4.0, 4.0, 10.0},
        {-20.0, -19.5, -19.0, 15.0, 15.2},
        {5.0, 5.0 + 1e-13, 5.0 - 1e-13, 6.0, 6.0},
    };
    for (const auto& nodes : cases) {
        const double got = exp_divided_difference(nodes);
        EXPECT_LT(rel_err(got, dd_oracle(nodes)), 1e-13) << "nodes starting " << nodes.front();
    }
}

TEST(DividedDifference, RandomClustersAgainstOracle) {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> centre(-10, 10), jitter(-0.4, 0.4);
    std::uniform_int_distribution<int> size(1, 7);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> nodes;
        const int groups = size(rng) % 3 + 1;
        for (int g = 0; g < groups; ++g) {
            const double c = centre(rng);
            const int k = size(rng) % 3 + 1;
            for (int i = 0; i < k; ++i) nodes.push_back(c + jitter(rng) * (i % 2));
        }
        EXPECT_LT(rel_err(exp_divided_difference(nodes), dd_oracle(nodes)), 1e-12) << "trial " << trial;
    }
}

// ---- simplex kernels ----

TEST(ExpIntegral, ClosedForms) {
    const SimplexD unit{Eigen::VectorXd::Constant(1, 0.0), Eigen::VectorXd::Constant(1, 1.0)};
    EXPECT_NEAR(exp_integral_simplex(unit, Eigen::VectorXd::Constant(1, 1.0)), std::numbers::e - 1, 1e-15);
    const SimplexD tri{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};
    EXPECT_NEAR(exp_integral_simplex(tri, Eigen::Vector2d(1, 1)), 1.0, 1e-15);
    EXPECT_NEAR(exp_integral_simplex(tri, Eigen::Vector2d(0, 0)), 0.5, 1e-16);
}

TEST(ExpIntegral, OverflowGuard) {
    const SimplexD unit{Eigen::VectorXd::Constant(1, 0.0), Eigen::VectorXd::Constant(1, 1.0)};
    EXPECT_THROW(exp_integral_simplex(unit, Eigen::VectorXd::Constant(1, 800.0)), RangeError);
}

TEST(ExpMoments, DividedDifferencesMatchQuadrature) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> vd(-10, 10);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + trial % 4;
        const auto s = random_simplex(rng, n);
        Eigen::VectorXd v(n);
        for (int k = 0; k < n; ++k) v[k] = vd(rng);
        const auto dd = exp_moments_simplex(s, v, 2);
        const auto qd = quadrature::exp_moments(s, v, 2);
        const double scale = std::abs(qd.mass);
        EXPECT_LT(rel_err(dd.mass, qd.mass), 1e-9);
        EXPECT_LT((dd.first - qd.first).norm() / scale, 1e-9);
        EXPECT_LT((dd.second - qd.second).norm() / scale, 1e-9);
    }
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
    const auto rule = quadrature::gauss_legendre(5);
    double s = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 9);
    EXPECT_NEAR(s, 0.1, 1e-15);
}

// ---- weighted moments ----

TEST(WeightedMoments, IntervalClosedForms) {
    const auto m = triangulate(interval(Q("-1"), Q("1")));
    const Eigen::VectorXd one = Eigen::VectorXd::Constant(1, 1.0);
    EXPECT_NEAR(weighted_volume(m, one), 2 * std::sinh(1.0), 1e-14);
    EXPECT_NEAR(weighted_volume(m, Eigen::VectorXd::Zero(1)), 2.0, 1e-14);
    const auto moved = triangulate(interval(Q("0"), Q("2")));
    EXPECT_NEAR(weighted_volume(moved, one) / weighted_volume(m, one), std::numbers::e, 1e-14);

    EXPECT_NEAR(weighted_barycenter(triangulate(interval(Q("0"), Q("1"))), one)[0], 1 / (std::numbers::e - 1), 1e-14);
    EXPECT_NEAR(weighted_barycenter(m, one)[0], 1 / std::tanh(1.0) - 1, 1e-14);
    EXPECT_NEAR(weighted_covariance(m, Eigen::VectorXd::Zero(1))(0, 0), 1.0 / 3, 1e-14);
}

TEST(WeightedMoments, SquareCovarianceAtZero) {
    std::vector<Halfspace> hs{{QV({"1", "0"}), Q("1")}, {QV({"-1", "0"}), Q("1")}, {QV({"0", "1"}), Q("1")}, {QV({"0", "-1"}), Q("1")}};
    const auto cov = weighted_covariance(triangulate(polytope_from_halfspaces(hs, 2)), Eigen::Vector2d::Zero());
    EXPECT_NEAR(cov(0, 0), 1.0 / 3, 1e-14);
    EXPECT_NEAR(cov(1, 1), 1.0 / 3, 1e-14);
    EXPECT_NEAR(cov(0, 1), 0.0, 1e-14);
}

TEST(WeightedMoments, HexagonCovarianceAgainstQuadrature) {
    const auto mesh = triangulate(polytope_from_support(hexagon_fan(), QVector(6, Rational(1))));
    const Eigen::Vector2d v(2, 0);
    const auto cov = weighted_covariance(mesh, v);
    const auto oracle = quadrature_covariance(mesh, v);
    EXPECT_LT((cov - oracle).norm() / oracle.norm(), 1e-9);
    EXPECT_NEAR((cov - cov.transpose()).norm(), 0.0, 1e-15);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
}

TEST(WeightedMoments, ZeroFieldRecoversExactMoments) {
    for (const auto& p : {polytope_from_support(blowup_fan(), QV({"1", "1", "1", "1"})),
                          polytope_from_halfspaces(pe_halfspaces(Q("3/10")), 4)}) {
        const auto mesh = triangulate(p);
        const auto rep = moment_report(mesh, Eigen::VectorXd::Zero(p.dimension));
        EXPECT_LE(std::abs(rep.weighted_volume - to_double(rep.volume)), 1e-12 * to_double(rep.volume));
        for (int i = 0; i < p.dimension; ++i)
            EXPECT_NEAR(rep.weighted_barycenter[i], to_double(rep.barycenter[static_cast<std::size_t>(i)]), 1e-12);
    }
}

TEST(WeightedMoments, TranslationEquivariance) {
    std::mt19937_64 rng(5);
    const auto p = polytope_from_support(hexagon_fan(), hexagon_row(Q("1/10")));
    std::uniform_real_distribution<double> vd(-4, 4);
    for (int k = 0; k < 10; ++k) {
        const QVector c{random_rational(rng, 5, 3), random_rational(rng, 5, 3)};
        const Eigen::Vector2d v(vd(rng), vd(rng));
        const auto a = weighted_barycenter(triangulate(p), v);
        const auto b = weighted_barycenter(triangulate(translate(p, c)), v);
        EXPECT_NEAR((b - a - Eigen::Vector2d(to_double(c[0]), to_double(c[1]))).norm(), 0.0, 1e-10);
    }
}

TEST(WeightedMoments, BarycenterStaysInterior) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> vd(-30, 30);
    const auto p = polytope_from_support(blowup_fan(), QV({"1", "1", "1", "1"}));
    const auto mesh = triangulate(p);
    for (int k = 0; k < 20; ++k) {
        const Eigen::Vector2d v(vd(rng), vd(rng));
        const auto a = weighted_barycenter(mesh, v);
        for (const auto& h : p.halfspaces) {
            const double lhs = to_double(h.normal[0]) * a[0] + to_double(h.normal[1]) * a[1];
            EXPECT_GT(lhs, -to_double(h.offset));
        }
    }
}

TEST(WeightedMoments, FiniteDifferenceJacobianMatchesCovariance) {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> vd(-3, 3);
    const auto mesh = triangulate(polytope_from_halfspaces(pe_halfspaces(Q("1/2")), 4));
    for (int k = 0; k < 5; ++k) {
        Eigen::VectorXd v(4);
        for (int i = 0; i < 4; ++i) v[i] = vd(rng);
        const auto cov = weighted_covariance(mesh, v);
        const double step = 1e-5;
        for (int j = 0; j < 4; ++j) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(4);
            e[j] = step;
            const Eigen::VectorXd col = (weighted_barycenter(mesh, v + e) - weighted_barycenter(mesh, v - e)) / (2 * step);
            EXPECT_LT((col - cov.col(j)).cwiseAbs().maxCoeff(), 1e-6);
        }
    }
}

TEST(WeightedMoments, LargeFieldsStayFinite) {
    const auto mesh = triangulate(interval(Q("-1"), Q("1")));
    const auto w = weighted_moments(mesh, Eigen::VectorXd::Constant(1, 600.0), 2);
    EXPECT_TRUE(std::isfinite(w.log_volume));
    EXPECT_NEAR(w.barycenter[0], 1 - 1.0 / 600, 1e-12);
}
