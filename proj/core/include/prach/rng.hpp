// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <cmath>
#include <complex>
#include <limits>

#include <boost/random/normal_distribution.hpp>

namespace prach {

inline std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++; satisfies UniformRandomBitGenerator.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) { reseed(seed); }

    void reseed(std::uint64_t seed)
    {
        std::uint64_t sm = seed;
        for (auto& w : s_)
            w = splitmix64(sm);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on (0,1), never 0
    double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> s_{};
};

enum class StreamPurpose : std::uint64_t {
    occasion = 1,
    calibration = 2,
    analytic = 3,
    check = 4,
    test = 5,
};

// Independent stream keyed by (seed, purpose, index).
inline Rng make_stream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index)
{
    std::uint64_t h = seed;
    std::uint64_t key = splitmix64(h);
    key ^= static_cast<std::uint64_t>(purpose) * 0xd1b54a32d192ed03ULL;
    std::uint64_t h2 = key;
    key = splitmix64(h2) ^ (index * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL);
    std::uint64_t h3 = key;
    return Rng(splitmix64(h3));
}

// Standard normal draws (ziggurat) bound to a stream.
class Gaussian {
public:
    explicit Gaussian(Rng& rng) : rng_(&rng) {}
    double operator()() { return dist_(*rng_); }
    // circularly symmetric, total variance `power`
    std::complex<double> complex(double power = 1.0)
    {
        const double s = std::sqrt(0.5 * power);
        const double re = dist_(*rng_);
        return {s * re, s * dist_(*rng_)};
    }
    Rng& rng() { return *rng_; }

private:
    Rng* rng_;
    boost::random::normal_distribution<double> dist_{};
};

} // namespace prach
