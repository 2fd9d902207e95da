#pragma once

#include <cstdint>
#include <string>

#include "refsim/errors.hpp"

namespace refsim {

namespace detail {

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(
        static_cast<unsigned __int128>(a) * b % m);
}

inline uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod_u64(result, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return result;
}

} // namespace detail

// Deterministic Miller-Rabin; the listed bases decide primality exactly for
// every 64-bit integer.
inline bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                       23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                       23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = detail::powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i < r - 1; ++i) {
            x = detail::mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// A residue modulo a per-referendum prime. Every element carries its modulus;
// mixing moduli is a hard error rather than silent wraparound.
class FieldElement {
public:
    FieldElement(uint64_t value, uint64_t modulus)
        : value_(value % check_modulus(modulus)), modulus_(modulus) {}

    // Embeds a signed integer, so -1 becomes p-1.
    static FieldElement from_signed(int64_t value, uint64_t modulus) {
        check_modulus(modulus);
        int64_t m = static_cast<int64_t>(modulus);
        int64_t r = value % m;
        if (r < 0) r += m;
        return FieldElement(static_cast<uint64_t>(r), modulus);
    }

    uint64_t value() const { return value_; }
    uint64_t modulus() const { return modulus_; }

    // Residues above p/2 are read as negative integers; votes and their sums
    // stay far below p/2 by the p > 4*k^2 parameter rule.
    int64_t to_signed() const {
        if (value_ > modulus_ / 2)
            return static_cast<int64_t>(value_) - static_cast<int64_t>(modulus_);
        return static_cast<int64_t>(value_);
    }

    FieldElement operator+(const FieldElement& rhs) const {
        check_same(rhs);
        uint64_t sum = value_ + rhs.value_; // both < p <= 2^63, no overflow
        if (sum >= modulus_) sum -= modulus_;
        return FieldElement(sum, modulus_, unchecked{});
    }

    FieldElement operator-(const FieldElement& rhs) const {
        check_same(rhs);
        uint64_t diff = value_ >= rhs.value_ ? value_ - rhs.value_
                                             : value_ + modulus_ - rhs.value_;
        return FieldElement(diff, modulus_, unchecked{});
    }

    FieldElement operator*(const FieldElement& rhs) const {
        check_same(rhs);
        return FieldElement(detail::mulmod_u64(value_, rhs.value_, modulus_),
                            modulus_, unchecked{});
    }

    FieldElement operator-() const {
        return FieldElement(value_ == 0 ? 0 : modulus_ - value_, modulus_,
                            unchecked{});
    }

    FieldElement square() const { return *this * *this; }

    FieldElement pow(uint64_t exp) const {
        return FieldElement(detail::powmod_u64(value_, exp, modulus_), modulus_,
                            unchecked{});
    }

    // Multiplicative inverse via Fermat; the modulus is prime by construction.
    FieldElement inverse() const {
        if (value_ == 0)
            fail(ErrorKind::InvalidParams, "zero has no multiplicative inverse");
        return pow(modulus_ - 2);
    }

    bool operator==(const FieldElement& rhs) const {
        return value_ == rhs.value_ && modulus_ == rhs.modulus_;
    }
    bool operator!=(const FieldElement& rhs) const { return !(*this == rhs); }

private:
    struct unchecked {};
    FieldElement(uint64_t value, uint64_t modulus, unchecked)
        : value_(value), modulus_(modulus) {}

    static uint64_t check_modulus(uint64_t m) {
        if (m < 2 || m > (1ull << 63))
            fail(ErrorKind::InvalidParams,
                 "field modulus must be in [2, 2^63]: " + std::to_string(m));
        return m;
    }

    void check_same(const FieldElement& rhs) const {
        if (modulus_ != rhs.modulus_)
            fail(ErrorKind::InvalidParams,
                 "field elements from different moduli: " +
                     std::to_string(modulus_) + " vs " +
                     std::to_string(rhs.modulus_));
    }

    uint64_t value_;
    uint64_t modulus_;
};

} // namespace refsim
