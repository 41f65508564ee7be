#ifndef RMH_RNG_HPP
#define RMH_RNG_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace rmh {

constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Reproducible seed with named sub-streams.  Derivation is a stable hash:
/// stream(label) mixes an FNV-1a hash of the label into the state via
/// splitmix64, index(i) mixes the integer directly.  Identical master seed
/// and derivation path give bit-identical draws on every platform.
struct Seed {
    std::uint64_t state = 0;

    Seed stream(std::string_view label) const {
        std::uint64_t h = 1469598103934665603ull;
        for (char c : label) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        return Seed{splitmix64(state ^ h)};
    }

    Seed index(std::uint64_t i) const {
        return Seed{splitmix64(state ^ splitmix64(i))};
    }
};

/// xoshiro256++ with hand-rolled distributions.  The standard library
/// distributions are not bit-stable across implementations, so everything
/// downstream of a Seed goes through this class.
class Rng {
public:
    explicit Rng(Seed seed) {
        std::uint64_t z = seed.state;
        for (auto& word : s_) {
            z = splitmix64(z);
            word = z;
        }
    }

    std::uint64_t next() {
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

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1); safe as a log argument.
    double uniform_pos() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
        const std::uint64_t bound = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = next();
        while (x >= bound) x = next();
        return x % n;
    }

    double normal() {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Marsaglia-Tsang squeeze-free gamma sampler.
    double gamma(double shape) {
        if (shape <= 0) throw std::invalid_argument("gamma: shape must be positive");
        if (shape < 1.0) {
            const double boost = std::pow(uniform_pos(), 1.0 / shape);
            return gamma(shape + 1.0) * boost;
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            const double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0) continue;
            v = v * v * v;
            const double u = uniform_pos();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
        }
    }

    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        if (x + y == 0) return 0.5;
        return x / (x + y);
    }

    /// Exact binomial draw: BTRS transformed rejection for n*min(p,q) >= 10,
    /// sequential inversion below that.
    long long binomial(long long n, double p) {
        if (n < 0) throw std::invalid_argument("binomial: n must be nonnegative");
        if (p < 0 || p > 1) throw std::invalid_argument("binomial: p must be in [0,1]");
        if (n == 0 || p == 0) return 0;
        if (p == 1) return n;
        const bool flip = p > 0.5;
        const double ps = flip ? 1.0 - p : p;
        const long long k = (static_cast<double>(n) * ps >= 10.0) ? btrs(n, ps)
                                                                  : inversion(n, ps);
        return flip ? n - k : k;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    long long inversion(long long n, double p) {
        const double q = 1.0 - p;
        const double s = p / q;
        const double a = static_cast<double>(n + 1) * s;
        for (;;) {
            double r = std::pow(q, static_cast<double>(n));
            double u = uniform();
            long long x = 0;
            bool restarted = false;
            while (u > r) {
                u -= r;
                ++x;
                if (x > n) { restarted = true; break; }
                r *= a / static_cast<double>(x) - s;
            }
            if (!restarted) return x;
        }
    }

    long long btrs(long long n, double p) {
        const double q = 1.0 - p;
        const double nd = static_cast<double>(n);
        const double spq = std::sqrt(nd * p * q);
        const double b = 1.15 + 2.53 * spq;
        const double a = -0.0873 + 0.0248 * b + 0.01 * p;
        const double c = nd * p + 0.5;
        const double vr = 0.92 - 4.2 / b;
        const double urvr = 0.86 * vr;
        const double alpha = (2.83 + 5.1 / b) * spq;
        const double lpq = std::log(p / q);
        const double m = std::floor((nd + 1.0) * p);
        const double h = std::lgamma(m + 1.0) + std::lgamma(nd - m + 1.0);
        for (;;) {
            double v = uniform();
            double u;
            if (v <= urvr) {
                u = v / vr - 0.43;
                return static_cast<long long>(
                    std::floor((2.0 * a / (0.5 - std::fabs(u)) + b) * u + c));
            }
            if (v >= vr) {
                u = uniform() - 0.5;
            } else {
                u = v / vr - 0.93;
                u = std::copysign(0.5, u) - u;
                v = vr * uniform();
            }
            const double us = 0.5 - std::fabs(u);
            const double kd = std::floor((2.0 * a / us + b) * u + c);
            if (kd < 0 || kd > nd) continue;
            v = v * alpha / (a / (us * us) + b);
            if (std::log(v) <=
                h - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0) + (kd - m) * lpq)
                return static_cast<long long>(kd);
        }
    }

    std::uint64_t s_[4];
};

} // namespace rmh

#endif
