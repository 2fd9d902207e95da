#pragma once

// Test-only utilities. The polynomial oracle here deliberately takes a
// different route than the library (Gaussian elimination on the Vandermonde
// system instead of Lagrange interpolation) so the two can check each other.

#include <cmath>
#include <cstdint>
#include <deque>
#include <span>
#include <stdexcept>
#include <vector>

namespace testutil {

struct ScriptedSource {
    std::deque<uint64_t> values;

    uint64_t uniform(uint64_t bound) {
        if (values.empty()) throw std::logic_error("scripted source exhausted");
        uint64_t v = values.front() % bound;
        values.pop_front();
        return v;
    }
    void fill_bytes(std::span<uint8_t> out) {
        for (auto& b : out) b = static_cast<uint8_t>(uniform(256));
    }
};

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

inline uint64_t powmod(uint64_t base, uint64_t exp, uint64_t p) {
    uint64_t r = 1 % p;
    base %= p;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, p);
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    return r;
}

inline uint64_t submod(uint64_t a, uint64_t b, uint64_t p) {
    return a >= b ? a - b : a + p - b;
}

// Evaluate a polynomial given by coefficients (constant term first).
inline uint64_t poly_eval(const std::vector<uint64_t>& coeffs, uint64_t x,
                          uint64_t p) {
    uint64_t acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = (mulmod(acc, x, p) + *it) % p;
    return acc;
}

// Solve the Vandermonde system for the unique degree-<=(points-1) polynomial
// through the given (x, y) pairs; returns coefficients, constant term first.
inline std::vector<uint64_t> interpolate_coeffs(
    const std::vector<std::pair<uint64_t, uint64_t>>& points, uint64_t p) {
    const size_t n = points.size();
    // augmented matrix [V | y]
    std::vector<std::vector<uint64_t>> m(n, std::vector<uint64_t>(n + 1, 0));
    for (size_t i = 0; i < n; ++i) {
        uint64_t xp = 1;
        for (size_t j = 0; j < n; ++j) {
            m[i][j] = xp;
            xp = mulmod(xp, points[i].first % p, p);
        }
        m[i][n] = points[i].second % p;
    }
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0) ++pivot;
        if (pivot == n) throw std::logic_error("singular interpolation system");
        std::swap(m[col], m[pivot]);
        uint64_t inv = powmod(m[col][col], p - 2, p);
        for (size_t j = col; j <= n; ++j) m[col][j] = mulmod(m[col][j], inv, p);
        for (size_t row = 0; row < n; ++row) {
            if (row == col || m[row][col] == 0) continue;
            uint64_t factor = m[row][col];
            for (size_t j = col; j <= n; ++j)
                m[row][j] = submod(m[row][j], mulmod(factor, m[col][j], p), p);
        }
    }
    std::vector<uint64_t> coeffs(n);
    for (size_t i = 0; i < n; ++i) coeffs[i] = m[i][n];
    return coeffs;
}

// Secret recovered from points assuming polynomial degree = points.size()-1.
inline uint64_t interpolate_secret(
    const std::vector<std::pair<uint64_t, uint64_t>>& points, uint64_t p) {
    return interpolate_coeffs(points, p)[0];
}

// All k-subsets of {0, ..., n-1} in lexicographic order.
inline std::vector<std::vector<size_t>> subsets(size_t n, size_t k) {
    std::vector<std::vector<size_t>> out;
    std::vector<size_t> idx(k);
    for (size_t i = 0; i < k; ++i) idx[i] = i;
    if (k > n) return out;
    while (true) {
        out.push_back(idx);
        size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

// Upper critical value of the chi-square distribution via the
// Wilson-Hilferty cube approximation; accurate to well under 1% for the
// degrees of freedom used in these tests.
inline double chi_square_critical(double df, double z_alpha) {
    double a = 2.0 / (9.0 * df);
    double t = 1.0 - a + z_alpha * std::sqrt(a);
    return df * t * t * t;
}

inline constexpr double kZ99 = 2.3263478740408408; // standard normal, alpha=0.01

} // namespace testutil
