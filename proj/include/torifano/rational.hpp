#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace torifano {

using Rational = boost::multiprecision::mpq_rational;
using QVector = std::vector<Rational>;
using QMatrix = std::vector<QVector>;  // row-major
using IntVector = std::vector<std::int64_t>;

/// Parses "p/q", an integer, or a plain decimal ("0.25", "-1.5e-3") exactly.
/// Throws InputError on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Lowest-terms "p/q"; integers are written without a denominator.
std::string to_string(const Rational& q);

/// Exact binary value of a finite double.
Rational rational_from_double(double x);

double to_double(const Rational& q);
std::vector<double> to_doubles(std::span<const Rational> v);

QVector to_rationals(std::span<const std::int64_t> v);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);
QVector add(std::span<const Rational> a, std::span<const Rational> b);
QVector subtract(std::span<const Rational> a, std::span<const Rational> b);
QVector scale(std::span<const Rational> a, const Rational& s);
bool is_zero(std::span<const Rational> v);
bool lex_less(std::span<const Rational> a, std::span<const Rational> b);

/// Unique solution of rows * x = rhs, or nullopt when the square system is singular.
std::optional<QVector> solve_linear(QMatrix rows, QVector rhs);

/// Rank by fraction-exact Gaussian elimination.
std::size_t rank(QMatrix rows);

Rational determinant(QMatrix rows);

/// Basis of the null space of the given rows (each vector has `cols` entries).
std::vector<QVector> null_space(QMatrix rows, std::size_t cols);

/// Affine dimension of a point set (-1 for the empty set).
int affine_dimension(std::span<const QVector> points);

}  // namespace torifano
