#include "torifano/rational.hpp"

#include "torifano/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace torifano {

namespace {

using Integer = boost::multiprecision::mpz_int;

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

Integer parse_integer(std::string_view s, std::string_view whole) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) throw InputError("malformed rational '" + std::string(whole) + "'");
    Integer value{std::string(s)};
    return negative ? Integer(-value) : value;
}

Integer pow10(long e) {
    Integer r = 1;
    for (long i = 0; i < e; ++i) r *= 10;
    return r;
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
    long exponent = 0;
    if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
        const auto exp_text = s.substr(epos + 1);
        const Integer e = parse_integer(exp_text, whole);
        if (abs(e) > 4000) throw InputError("exponent out of range in '" + std::string(whole) + "'");
        exponent = e.convert_to<long>();
        s = s.substr(0, epos);
    }
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    const auto dot_pos = s.find('.');
    std::string digits;
    if (dot_pos == std::string_view::npos) {
        digits = std::string(s);
    } else {
        const auto int_part = s.substr(0, dot_pos);
        const auto frac_part = s.substr(dot_pos + 1);
        if (int_part.empty() && frac_part.empty()) throw InputError("malformed rational '" + std::string(whole) + "'");
        if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)))
            throw InputError("malformed rational '" + std::string(whole) + "'");
        digits = std::string(int_part) + std::string(frac_part);
        exponent -= static_cast<long>(frac_part.size());
    }
    if (!all_digits(digits)) throw InputError("malformed rational '" + std::string(whole) + "'");
    Rational r{Integer(digits)};
    if (exponent > 0) r *= Rational(pow10(exponent));
    if (exponent < 0) r /= Rational(pow10(-exponent));
    return negative ? Rational(-r) : r;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const auto s = trim(text);
    if (s.empty()) throw InputError("empty rational");
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        const Integer num = parse_integer(trim(s.substr(0, slash)), text);
        const Integer den = parse_integer(trim(s.substr(slash + 1)), text);
        if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }
    return parse_decimal(s, text);
}

std::string to_string(const Rational& q) {
    const auto num = numerator(q);
    const auto den = denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw InputError("non-finite value cannot be made rational");
    int exp = 0;
    double mant = std::frexp(x, &exp);
    // 53 mantissa bits scaled to an integer
    const double scaled = std::ldexp(mant, 53);
    Rational r{Integer(static_cast<long long>(scaled))};
    exp -= 53;
    Integer two_pow = 1;
    two_pow <<= std::abs(exp);
    if (exp >= 0) return r * Rational(two_pow);
    return r / Rational(two_pow);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::vector<double> to_doubles(std::span<const Rational> v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& q : v) out.push_back(to_double(q));
    return out;
}

QVector to_rationals(std::span<const std::int64_t> v) {
    QVector out;
    out.reserve(v.size());
    for (auto x : v) out.emplace_back(static_cast<long long>(x));
    return out;
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

QVector add(std::span<const Rational> a, std::span<const Rational> b) {
    QVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

QVector subtract(std::span<const Rational> a, std::span<const Rational> b) {
    QVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

QVector scale(std::span<const Rational> a, const Rational& s) {
    QVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * s;
    return out;
}

bool is_zero(std::span<const Rational> v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
}

bool lex_less(std::span<const Rational> a, std::span<const Rational> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

namespace {

// Row-reduces in place; returns the pivot column of each pivot row.
std::vector<std::size_t> row_reduce(QMatrix& m, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
        std::size_t pivot = row;
        while (pivot < m.size() && m[pivot][col] == 0) ++pivot;
        if (pivot == m.size()) continue;
        std::swap(m[row], m[pivot]);
        const Rational inv = 1 / m[row][col];
        for (std::size_t c = col; c < m[row].size(); ++c) m[row][c] *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col] == 0) continue;
            const Rational factor = m[r][col];
            for (std::size_t c = col; c < m[r].size(); ++c) m[r][c] -= factor * m[row][c];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

std::optional<QVector> solve_linear(QMatrix rows, QVector rhs) {
    const std::size_t n = rhs.size();
    if (rows.size() != n) throw InputError("solve_linear: system is not square");
    for (std::size_t i = 0; i < n; ++i) rows[i].push_back(rhs[i]);
    const auto pivots = row_reduce(rows, n);
    if (pivots.size() < n) return std::nullopt;
    QVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[pivots[i]] = rows[i][n];
    return x;
}

std::size_t rank(QMatrix rows) {
    if (rows.empty()) return 0;
    const std::size_t cols = rows.front().size();
    return row_reduce(rows, cols).size();
}

Rational determinant(QMatrix m) {
    const std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0) ++pivot;
        if (pivot == n) return 0;
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m[r][col] == 0) continue;
            const Rational factor = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
        }
    }
    return det;
}

std::vector<QVector> null_space(QMatrix rows, std::size_t cols) {
    const auto pivots = row_reduce(rows, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<QVector> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        QVector v(cols, Rational(0));
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -rows[i][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

int affine_dimension(std::span<const QVector> points) {
    if (points.empty()) return -1;
    QMatrix diffs;
    diffs.reserve(points.size() - 1);
    for (std::size_t i = 1; i < points.size(); ++i) diffs.push_back(subtract(points[i], points[0]));
    if (diffs.empty()) return 0;
    return static_cast<int>(rank(std::move(diffs)));
}

}  // namespace torifano
