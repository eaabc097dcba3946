#ifndef FHE_RNG_HPP
#define FHE_RNG_HPP

#include <cstdint>
#include <cmath>
#include <stdexcept>

namespace fhe {

// splitmix64, used only to expand (seed, stream index) into generator state.
inline std::uint64_t splitmix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ with explicit arithmetic so that draws are bit-reproducible
// across platforms and independent of any library distribution internals.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index) {
        std::uint64_t s = seed ^ (0x5851f42d4c957f2dULL * (stream_index + 1));
        for (int i = 0; i < 4; ++i) state_[i] = splitmix64(s);
        // avoid the all-zero state (splitmix cannot produce four zeros from
        // distinct increments, but keep the guard cheap and explicit)
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform on (0,1), open at both ends
    double uniform() {
        const std::uint64_t u = next_u64() >> 11;  // 53 bits
        double x = (static_cast<double>(u) + 0.5) * 0x1p-53;
        return x;
    }

    double exponential() { return -std::log(uniform()); }

    // Box-Muller; the spare is kept so consecutive calls use both values.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace fhe

#endif
