#pragma once

// Test-only exact rank oracle over rationals, independent of the SVD path
// in the library. Intended for small integer matrices.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace signet::test {

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::runtime_error("Rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    bool is_zero() const { return num == 0; }

    friend Rational operator*(Rational a, Rational b) { return Rational(a.num * b.num, a.den * b.den); }
    friend Rational operator/(Rational a, Rational b) { return Rational(a.num * b.den, a.den * b.num); }
    friend Rational operator-(Rational a, Rational b) {
        return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
    }
};

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Rank by exact Gaussian elimination.
inline int exact_rank(RationalMatrix m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    int rank = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t pivot = row;
        while (pivot < rows && m[pivot][col].is_zero()) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[row], m[pivot]);
        for (std::size_t r = row + 1; r < rows; ++r) {
            if (m[r][col].is_zero()) continue;
            Rational factor = m[r][col] / m[row][col];
            for (std::size_t c = col; c < cols; ++c) m[r][c] = m[r][c] - factor * m[row][c];
        }
        ++row;
        ++rank;
    }
    return rank;
}

/// Exact Kalman matrix [b, Ab, ..., A^{n-1}b] over rationals.
inline RationalMatrix exact_controllability_matrix(const std::vector<std::vector<std::int64_t>>& a,
                                                   const std::vector<std::int64_t>& b) {
    const std::size_t n = b.size();
    RationalMatrix cm(n, std::vector<Rational>(n));
    std::vector<Rational> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = Rational(b[i]);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) cm[i][k] = col[i];
        std::vector<Rational> next(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) next[i] = next[i] - (Rational(-a[i][j]) * col[j]);
        col = next;
    }
    return cm;
}

}  // namespace signet::test
