#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "refsim/errors.hpp"
#include "refsim/field.hpp"
#include "refsim/rng.hpp"

namespace refsim {

// One polynomial evaluation (x, f(x)). The eval point identifies the worker
// the share belongs to; the secret sits at f(0). degree_hint tracks the
// degree of the underlying polynomial: t-1 for fresh shares, 2(t-1) once a
// share has been squared.
struct Share {
    FieldElement eval_point;
    FieldElement value;
    uint32_t degree_hint;

    bool operator==(const Share& rhs) const = default;
};

// Parameters of one t-of-n sharing: any t shares reconstruct, any t-1 reveal
// nothing. n >= 2t-1 is required up front because the squared-share checksum
// lives on a degree-2(t-1) polynomial and needs 2t-1 evaluation points.
struct SharingParams {
    uint32_t threshold;               // t
    uint64_t modulus;                 // p, prime
    std::vector<uint64_t> eval_points; // x-coordinates, one per share holder

    SharingParams(uint32_t t, uint32_t n, uint64_t p)
        : SharingParams(t, p, default_points(n)) {}

    SharingParams(uint32_t t, uint64_t p, std::vector<uint64_t> points)
        : threshold(t), modulus(p), eval_points(std::move(points)) {
        validate();
    }

    uint32_t share_count() const {
        return static_cast<uint32_t>(eval_points.size());
    }

    uint32_t fresh_degree() const { return threshold - 1; }
    uint32_t squared_degree() const { return 2 * (threshold - 1); }

private:
    static std::vector<uint64_t> default_points(uint32_t n) {
        std::vector<uint64_t> points(n);
        for (uint32_t j = 0; j < n; ++j) points[j] = j + 1;
        return points;
    }

    void validate() const {
        const uint32_t n = share_count();
        if (!is_prime(modulus))
            fail(ErrorKind::InvalidParams,
                 "modulus is not prime: " + std::to_string(modulus));
        if (threshold < 1)
            fail(ErrorKind::InvalidParams, "threshold must be at least 1");
        if (threshold > n)
            fail(ErrorKind::InvalidParams,
                 "threshold " + std::to_string(threshold) + " exceeds share count " +
                     std::to_string(n));
        if (n >= modulus)
            fail(ErrorKind::InvalidParams, "share count must be below the modulus");
        if (n < 2 * threshold - 1)
            fail(ErrorKind::InvalidParams,
                 "checksum reconstruction needs n >= 2t-1, got n=" +
                     std::to_string(n) + ", t=" + std::to_string(threshold));
        std::set<uint64_t> seen;
        for (uint64_t x : eval_points) {
            if (x == 0 || x % modulus == 0)
                fail(ErrorKind::InvalidParams,
                     "eval point 0 is reserved for the secret");
            if (!seen.insert(x % modulus).second)
                fail(ErrorKind::InvalidParams,
                     "duplicate eval point: " + std::to_string(x));
        }
    }
};

namespace detail {

// f(x) for the polynomial through the given points, by Lagrange interpolation.
// Callers guarantee pairwise-distinct eval points.
inline FieldElement lagrange_eval(
    std::span<const std::pair<FieldElement, FieldElement>> points,
    const FieldElement& x) {
    FieldElement acc(0, x.modulus());
    for (size_t i = 0; i < points.size(); ++i) {
        FieldElement term = points[i].second;
        for (size_t j = 0; j < points.size(); ++j) {
            if (j == i) continue;
            term = term * (x - points[j].first) *
                   (points[i].first - points[j].first).inverse();
        }
        acc = acc + term;
    }
    return acc;
}

} // namespace detail

// Splits a secret into shares: evaluations of a uniformly random polynomial f
// with deg f = t-1 and f(0) = secret, at the configured points in holder order.
template <RandomSource R>
std::vector<Share> share_secret(const FieldElement& secret,
                                const SharingParams& params, R& rng) {
    if (secret.modulus() != params.modulus)
        fail(ErrorKind::InvalidParams, "secret modulus differs from sharing modulus");

    std::vector<FieldElement> coeffs;
    coeffs.reserve(params.threshold);
    coeffs.push_back(secret);
    for (uint32_t i = 1; i < params.threshold; ++i)
        coeffs.emplace_back(rng.uniform(params.modulus), params.modulus);

    std::vector<Share> shares;
    shares.reserve(params.share_count());
    for (uint64_t x : params.eval_points) {
        FieldElement point(x, params.modulus);
        FieldElement y(0, params.modulus);
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
            y = y * point + *it; // Horner
        shares.push_back(Share{point, y, params.fresh_degree()});
    }
    return shares;
}

// f(0) of the unique degree-<=degree polynomial through the first degree+1
// shares. All supplied shares must carry the matching degree hint and
// pairwise-distinct eval points.
inline FieldElement reconstruct(std::span<const Share> shares, uint32_t degree) {
    if (shares.size() < static_cast<size_t>(degree) + 1)
        fail(ErrorKind::InsufficientShares,
             "degree-" + std::to_string(degree) + " reconstruction needs " +
                 std::to_string(degree + 1) + " shares, got " +
                 std::to_string(shares.size()));

    std::set<uint64_t> seen;
    for (const Share& s : shares) {
        if (s.degree_hint != degree)
            fail(ErrorKind::InvalidParams,
                 "share degree hint " + std::to_string(s.degree_hint) +
                     " does not match reconstruction degree " +
                     std::to_string(degree));
        if (!seen.insert(s.eval_point.value()).second)
            fail(ErrorKind::InvalidParams,
                 "duplicate eval point: " + std::to_string(s.eval_point.value()));
    }

    const uint64_t p = shares.front().value.modulus();
    std::vector<std::pair<FieldElement, FieldElement>> points;
    points.reserve(degree + 1);
    for (size_t i = 0; i <= degree; ++i)
        points.emplace_back(shares[i].eval_point, shares[i].value);
    return detail::lagrange_eval(points, FieldElement(0, p));
}

// Pointwise addition: reconstructing the sums yields the sum of the secrets.
inline Share add_shares(const Share& a, const Share& b) {
    if (a.eval_point.modulus() != b.eval_point.modulus())
        fail(ErrorKind::ShareAlignment, "shares from different fields");
    if (a.eval_point != b.eval_point)
        fail(ErrorKind::ShareAlignment,
             "shares belong to different eval points: " +
                 std::to_string(a.eval_point.value()) + " vs " +
                 std::to_string(b.eval_point.value()));
    if (a.degree_hint != b.degree_hint)
        fail(ErrorKind::ShareAlignment,
             "shares have different degrees: " + std::to_string(a.degree_hint) +
                 " vs " + std::to_string(b.degree_hint));
    return Share{a.eval_point, a.value + b.value, a.degree_hint};
}

// Local squaring. Doubles the polynomial degree, so reconstruction of squared
// shares needs 2t-1 points instead of t. A share may be squared once.
inline Share square_share(const Share& a, const SharingParams& params) {
    if (a.degree_hint != params.fresh_degree())
        fail(ErrorKind::DegreeOverflow,
             "share at degree " + std::to_string(a.degree_hint) +
                 " cannot be squared again (limit " +
                 std::to_string(params.squared_degree()) + ")");
    return Share{a.eval_point, a.value.square(), params.squared_degree()};
}

struct OutlierScan {
    FieldElement consensus;            // f(0) of the majority polynomial
    std::vector<uint64_t> outliers;    // eval points of disagreeing shares
};

// Finds the degree-<=degree polynomial consistent with the largest subset of
// shares by enumerating all (degree+1)-subsets. Ties between polynomials with
// equal agreement are broken towards the lexicographically smallest agreeing
// eval-point set. Declares ambiguity when the best agreement count does not
// exceed degree+1, i.e. when no candidate has majority evidence beyond the
// points that define it.
inline OutlierScan detect_outliers(std::span<const Share> shares,
                                   uint32_t degree) {
    const size_t need = static_cast<size_t>(degree) + 2;
    if (shares.size() < need)
        fail(ErrorKind::CannotDetect,
             "outlier detection needs at least " + std::to_string(need) +
                 " shares for degree " + std::to_string(degree) + ", got " +
                 std::to_string(shares.size()));

    std::set<uint64_t> seen;
    for (const Share& s : shares)
        if (!seen.insert(s.eval_point.value()).second)
            fail(ErrorKind::InvalidParams,
                 "duplicate eval point: " + std::to_string(s.eval_point.value()));

    const uint64_t p = shares.front().value.modulus();
    const size_t m = shares.size();
    const size_t k = static_cast<size_t>(degree) + 1;

    std::optional<FieldElement> best_value;
    std::vector<uint64_t> best_agreeing;

    // enumerate k-subsets in lexicographic index order
    std::vector<size_t> idx(k);
    for (size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        std::vector<std::pair<FieldElement, FieldElement>> points;
        points.reserve(k);
        for (size_t i : idx)
            points.emplace_back(shares[i].eval_point, shares[i].value);

        std::vector<uint64_t> agreeing;
        for (const Share& s : shares) {
            if (detail::lagrange_eval(points, s.eval_point) == s.value)
                agreeing.push_back(s.eval_point.value());
        }
        std::sort(agreeing.begin(), agreeing.end());

        if (agreeing.size() > best_agreeing.size() ||
            (agreeing.size() == best_agreeing.size() &&
             !best_agreeing.empty() && agreeing < best_agreeing)) {
            best_agreeing = agreeing;
            best_value = detail::lagrange_eval(points, FieldElement(0, p));
        }

        // next combination
        size_t i = k;
        while (i > 0 && idx[i - 1] == m - k + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }

    if (best_agreeing.size() <= k)
        fail(ErrorKind::AmbiguousConsensus,
             "no polynomial is supported by more than " + std::to_string(k) +
                 " of " + std::to_string(m) + " shares");

    OutlierScan result{*best_value, {}};
    for (const Share& s : shares) {
        if (!std::binary_search(best_agreeing.begin(), best_agreeing.end(),
                                s.eval_point.value()))
            result.outliers.push_back(s.eval_point.value());
    }
    std::sort(result.outliers.begin(), result.outliers.end());
    return result;
}

} // namespace refsim
