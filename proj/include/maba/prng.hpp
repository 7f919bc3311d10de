#pragma once

#include <complex>
#include <cstdint>
#include <string_view>

namespace maba {

// xoshiro256** with splitmix64 seeding. Hand-rolled so that seeded draws
// are bit-identical across platforms and standard-library versions, which
// the reproducibility contract of the report files relies on.
class Prng {
  public:
    explicit Prng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s_) w = splitmix(x);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0,1) with 53 significant bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::complex<double> complex_in_box(double half_width) {
        double re = uniform(-half_width, half_width);
        double im = uniform(-half_width, half_width);
        return {re, im};
    }

    // Modulus in [rmin, rmax], uniform phase.
    std::complex<double> complex_annulus(double rmin, double rmax) {
        double r = uniform(rmin, rmax);
        double phi = uniform(0.0, 6.283185307179586);
        return std::polar(r, phi);
    }

    // Independent substream for a named check, insensitive to the order in
    // which checks run (needed for thread-count-independent draws).
    Prng stream(std::string_view name) const {
        std::uint64_t h = 1469598103934665603ull;  // FNV-1a
        for (char ch : name) {
            h ^= static_cast<unsigned char>(ch);
            h *= 1099511628211ull;
        }
        return Prng(s_[0] ^ h);
    }

    static std::uint64_t splitmix(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

  private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
    std::uint64_t s_[4];
};

}  // namespace maba
