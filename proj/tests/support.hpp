#pragma once

#include "torifano/fan.hpp"
#include "torifano/polytope.hpp"
#include "torifano/rational.hpp"

#include <cmath>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

namespace testing_support {

using namespace torifano;

inline Rational Q(const char* s) { return parse_rational(s); }

inline QVector QV(std::initializer_list<const char*> items) {
    QVector v;
    for (const char* s : items) v.push_back(parse_rational(s));
    return v;
}

inline Fan p2_fan() { return Fan{2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}, {2, 0}}}; }

// rays ordered by angle: e1, e1+e2, e2, -e1, -e1-e2, -e2
inline Fan hexagon_fan() {
    return Fan{2, {{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}}, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}}};
}

inline Fan blowup_fan() { return Fan{2, {{1, 0}, {1, 1}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}}; }

inline Fan p1_fan() { return Fan{1, {{1}, {-1}}, {{0}, {1}}}; }

// D_t: 1/2 everywhere, 1/2 + t on the ray (1,1)
inline QVector hexagon_row(const Rational& t) {
    QVector c(6, Rational(1, 2));
    c[1] += t;
    return c;
}

// P'(c) of the projective-bundle example, paper convention <y, d'> <= offset
inline std::vector<Halfspace> pe_halfspaces(const Rational& c) {
    const std::vector<std::vector<int>> d{{-1, -1, 0, -2}, {1, 0, 0, -2}, {0, 1, 0, -2}, {0, 0, -1, 3},
                                          {0, 0, 1, 3},    {0, 0, 0, 6},  {0, 0, 0, -6}};
    std::vector<Halfspace> out;
    for (std::size_t i = 0; i < d.size(); ++i) {
        QVector n;
        for (int x : d[i]) n.push_back(Rational(-x));
        out.push_back({n, (i == 3 || i == 4) ? c : Rational(1, 2)});
    }
    return out;
}

inline Polytope interval(const Rational& a, const Rational& b) {
    // [a, b] = {x >= a} and {-x >= -b}
    return polytope_from_halfspaces({{QVector{Rational(1)}, Rational(-a)}, {QVector{Rational(-1)}, b}}, 1);
}

// A_{[a,b]}(v) = a + (b-a) g(v(b-a)) with g(z) = 1/(1-e^{-z}) - 1/z
inline double interval_A(double a, double b, double v) {
    const double z = v * (b - a);
    const double g = std::abs(z) < 1e-3 ? 0.5 + z / 12 - z * z * z / 720 : -1 / std::expm1(-z) - 1 / z;
    return a + (b - a) * g;
}

inline Rational random_rational(std::mt19937_64& rng, int num_range, int den_max) {
    std::uniform_int_distribution<int> num(-num_range, num_range), den(1, den_max);
    return Rational(num(rng), den(rng));
}

}  // namespace testing_support
