#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

#include "adanav/core/types.hpp"

namespace adanav {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

// Deterministic generator; the only entropy source in the artifact.
// Same seed gives a bit-identical stream; labeled forks give independent
// sub-streams that only depend on (seed, label), not on draw position.
class SeededStream {
  public:
    explicit SeededStream(Seed seed) : base_(seed.value), state_(seed.value) {}

    std::uint64_t next_u64() { return detail::splitmix64(state_); }

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) {
        // Rejection-free modulo is fine here: n is tiny relative to 2^64.
        return next_u64() % n;
    }

    // Standard normal via Box-Muller, spare value cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    SeededStream fork(std::string_view label) const {
        std::uint64_t s = base_ ^ (detail::fnv1a64(label) * 0x9e3779b97f4a7c15ULL);
        std::uint64_t tmp = s;
        return SeededStream(Seed{detail::splitmix64(tmp)});
    }

    SeededStream fork(std::string_view label, std::uint64_t index) const {
        std::uint64_t s = base_ ^ (detail::fnv1a64(label) * 0x9e3779b97f4a7c15ULL);
        s ^= (index + 1) * 0xd1342543de82ef95ULL;
        std::uint64_t tmp = s;
        return SeededStream(Seed{detail::splitmix64(tmp)});
    }

    Seed base_seed() const { return Seed{base_}; }

  private:
    std::uint64_t base_;
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace adanav
