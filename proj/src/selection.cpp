#include "phe/selection.hpp"

#include <cmath>
#include <stdexcept>

namespace phe {

std::string to_string(Framework f) {
    switch (f) {
        case Framework::Density: return "density";
        case Framework::Poisson: return "poisson";
        case Framework::Vector: return "vector";
        case Framework::Counting: return "counting";
    }
    return "unknown";
}

Framework framework_from_string(const std::string& name) {
    if (name == "density") return Framework::Density;
    if (name == "poisson") return Framework::Poisson;
    if (name == "vector") return Framework::Vector;
    if (name == "counting" || name == "survival") return Framework::Counting;
    throw ConfigError("unknown framework: " + name);
}

PenaltySpec PenaltySpec::density(std::uint64_t n, double delta) {
    PenaltySpec s;
    s.framework = Framework::Density;
    s.n = n;
    s.delta = delta;
    s.epsilon = 1.0 / static_cast<double>(n);
    return s;
}

PenaltySpec PenaltySpec::poisson(double delta) {
    PenaltySpec s;
    s.framework = Framework::Poisson;
    s.delta = delta;
    s.epsilon = 1.0;
    return s;
}

PenaltySpec PenaltySpec::vector_counts(double kappa, double tau, double delta) {
    PenaltySpec s;
    s.framework = Framework::Vector;
    s.kappa = kappa;
    s.tau = tau;
    s.delta = delta;
    s.epsilon = 1.0;
    return s;
}

PenaltySpec PenaltySpec::counting(unsigned k, double kappa_prime, double gamma_bound,
                                  double delta) {
    PenaltySpec s;
    s.framework = Framework::Counting;
    s.k = k;
    s.kappa_prime = kappa_prime;
    s.gamma_bound = gamma_bound;
    s.delta = delta;
    s.epsilon = 1.0;
    return s;
}

double PenaltySpec::K_factor() const {
    if (tau <= kappa) return std::sqrt(2.0);
    return std::sqrt(2.0) / 2.0 + std::sqrt(tau / kappa - 0.5);
}

double PenaltySpec::min_c1() const {
    switch (framework) {
        case Framework::Density:
            return 8.0 * delta;
        case Framework::Poisson:
            return 3.0 * delta;
        case Framework::Vector: {
            const double K2 = K_factor() * K_factor();
            return kappa * delta * (1.0 + K2);
        }
        case Framework::Counting:
            return 16.0 * delta * (static_cast<double>(k) + kappa_prime);
    }
    return 0.0;
}

double PenaltySpec::min_c2() const {
    switch (framework) {
        case Framework::Density:
            return 202.0;
        case Framework::Poisson:
            return 6.0;
        case Framework::Vector: {
            const double K2 = K_factor() * K_factor();
            return 3.0 * kappa * K2;
        }
        case Framework::Counting:
            // weights enter as (1 + gamma/k) Delta_m, folded into c2
            return 404.0 * (static_cast<double>(k) + gamma_bound);
    }
    return 0.0;
}

/// Density penalties are per-observation: the whole c1 |m| + c2 Delta_m is
/// divided by n, so coefficient overrides stay meaningful across sample
/// sizes.
double PenaltySpec::scale() const {
    return framework == Framework::Density ? 1.0 / static_cast<double>(n) : 1.0;
}

double PenaltySpec::c1() const { return c1_override.value_or(min_c1()); }
double PenaltySpec::c2() const { return c2_override.value_or(min_c2()); }

void PenaltySpec::validate() const {
    if (delta < 1.0) throw ConfigError("penalty: delta must be >= 1");
    if (epsilon <= 0.0) throw ConfigError("penalty: epsilon must be positive");
    if (framework == Framework::Density && n < 1)
        throw ConfigError("penalty: density framework needs n >= 1");
    if (framework == Framework::Vector && (kappa <= 0.0 || tau < 0.0))
        throw ConfigError("penalty: vector framework needs kappa > 0, tau >= 0");
    if (framework == Framework::Counting &&
        (k < 1 || kappa_prime <= 0.0 || gamma_bound <= 0.0))
        throw ConfigError("penalty: counting framework needs k >= 1, kappa' > 0, gamma > 0");
    if (!unsafe) {
        if (c1_override && *c1_override < min_c1() * (1.0 - 1e-12))
            throw ConfigError("penalty: |m| coefficient below the framework floor (" +
                              std::to_string(min_c1()) + "); pass the unsafe flag to force it");
        if (c2_override && *c2_override < min_c2() * (1.0 - 1e-12))
            throw ConfigError("penalty: weight coefficient below the framework floor (" +
                              std::to_string(min_c2()) + "); pass the unsafe flag to force it");
    }
    if ((c1_override && *c1_override < 0.0) || (c2_override && *c2_override < 0.0))
        throw ConfigError("penalty: coefficients must be nonnegative");
}

std::array<double, 3> PenaltySpec::deviation_constants() const {
    switch (framework) {
        case Framework::Density:
            return {1.0, 202.0 / static_cast<double>(n), 8.0 / static_cast<double>(n)};
        case Framework::Poisson:
            return {1.0, 6.0, 3.0};
        case Framework::Vector: {
            const double K2 = K_factor() * K_factor();
            return {1.0, 3.0 * K2 * kappa, (1.0 + K2) * kappa};
        }
        case Framework::Counting:
            return {2.0, 404.0 * (static_cast<double>(k) + gamma_bound),
                    16.0 * (static_cast<double>(k) + kappa_prime)};
    }
    return {0.0, 0.0, 0.0};
}

double penalty(std::size_t cells, double weight, const PenaltySpec& spec) {
    if (weight < 0.0) throw std::invalid_argument("penalty: negative weight");
    return (spec.c1() * static_cast<double>(cells) + spec.c2() * weight) * spec.scale();
}

}  // namespace phe
