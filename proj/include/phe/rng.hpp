#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace phe {

/// splitmix64 step; used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for (master, replicate, stream). Pure function, so replicates can be
/// generated on any worker in any order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replicate,
                                 std::uint64_t stream = 0) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s);
    s ^= replicate * 0xda942042e4dd58b5ULL;
    std::uint64_t b = splitmix64(s);
    s ^= stream * 0x2545f4914f6cdd1dULL;
    std::uint64_t c = splitmix64(s);
    return a ^ (b << 1) ^ c;
}

/// mt19937_64 plus hand-rolled distribution transforms. The engine is fully
/// specified by the standard; the std:: distributions are not, so we do the
/// transforms ourselves to keep results identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    /// Uniform on [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0,1], safe for logs.
    double uniform_pos() { return 1.0 - uniform(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t below(std::uint64_t n) {
        // Lemire-style rejection-free enough for our n; use plain modulo with
        // rejection to stay unbiased.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    double exponential(double rate = 1.0) { return -std::log(uniform_pos()) / rate; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // Marsaglia polar method.
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    /// Exact Poisson(mean) via Knuth's product method, splitting large means
    /// so the running product stays away from underflow.
    std::uint64_t poisson(double mean) {
        if (mean < 0.0) throw std::invalid_argument("poisson: negative mean");
        if (mean == 0.0) return 0;
        std::uint64_t total = 0;
        while (mean > 30.0) {
            total += poisson_small(15.0);
            mean -= 15.0;
        }
        return total + poisson_small(mean);
    }

    std::uint64_t binomial(std::uint64_t n, double p) {
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("binomial: p outside [0,1]");
        std::uint64_t count = 0;
        for (std::uint64_t i = 0; i < n; ++i)
            if (uniform() < p) ++count;
        return count;
    }

    /// Gamma(shape, 1) by Marsaglia-Tsang, with the shape<1 boost.
    double gamma(double shape) {
        if (shape <= 0.0) throw std::invalid_argument("gamma: shape must be positive");
        if (shape < 1.0) {
            const double u = uniform_pos();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

private:
    std::uint64_t poisson_small(double mean) {
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double prod = uniform();
        while (prod > limit) {
            ++k;
            prod *= uniform();
        }
        return k;
    }

    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace phe
