#pragma once

#include <concepts>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace refsim {

// Any deterministic source of uniform draws. Scenario code passes a SeededRng;
// tests may pass scripted sources to pin polynomial coefficients.
template <class R>
concept RandomSource = requires(R& r, uint64_t bound, std::span<uint8_t> out) {
    { r.uniform(bound) } -> std::convertible_to<uint64_t>;
    { r.fill_bytes(out) };
};

// mt19937_64 has a standard-specified output sequence, so a seed pins the
// exact byte content of every artifact a scenario produces.
class SeededRng {
public:
    explicit SeededRng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Unbiased draw in [0, bound) via rejection; avoids the
    // implementation-defined behavior of std::uniform_int_distribution.
    uint64_t uniform(uint64_t bound) {
        if (bound <= 1) return 0;
        const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % bound;
    }

    void fill_bytes(std::span<uint8_t> out) {
        size_t i = 0;
        while (i < out.size()) {
            uint64_t v = engine_();
            for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
                out[i] = static_cast<uint8_t>(v >> (8 * b));
            }
        }
    }

    // Independent child generator; parent advances by one draw.
    SeededRng fork() { return SeededRng(next_u64()); }

    template <class T>
    void shuffle(std::vector<T>& items) {
        for (size_t i = items.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(uniform(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

static_assert(RandomSource<SeededRng>);

} // namespace refsim
