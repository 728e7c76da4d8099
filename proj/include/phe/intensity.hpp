#pragma once

#include <functional>
#include <string>
#include <vector>

#include "phe/partition.hpp"

namespace phe {

/// Adaptive Simpson integration; throws QuadratureError when the recursion
/// depth limit is hit before the tolerance is met.
double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double tol = 1e-10);

/// Nonnegative intensity on [0,1): symbolic descriptor with exact integrals
/// where the form allows and adaptive quadrature elsewhere.
class Intensity {
public:
    enum class Kind { Constant, PiecewiseConstant, PiecewisePolynomial, SqrtAffinePower };

    static Intensity constant(double c);

    /// breaks = 0 = x_0 < ... < x_D = 1, one value per piece.
    static Intensity piecewise_constant(std::vector<double> breaks, std::vector<double> values);

    /// One polynomial (monomial coefficients, absolute coordinate) per piece;
    /// must be nonnegative on its piece.
    static Intensity piecewise_polynomial(std::vector<double> breaks,
                                          std::vector<std::vector<double>> coeffs);

    /// s(x) = (a + b x^alpha)^2, with a + b x^alpha >= 0 on [0,1]. Monotone
    /// square root; alpha <= 1 gives a Holder-alpha square root.
    static Intensity sqrt_affine_power(double a, double b, double alpha);

    Kind kind() const { return kind_; }

    double value(double x) const;
    double integral(double lo, double hi) const;       // ∫ s
    double sqrt_integral(double lo, double hi) const;  // ∫ sqrt(s)
    double mass() const { return integral(0.0, 1.0); }
    double cdf(double x) const { return integral(0.0, x); }

    /// Solves cdf(x) = u on [0,1]; exact for piecewise-constant pieces,
    /// bisection to 1e-10 otherwise.
    double inverse_cdf(double u) const;

    /// Same intensity scaled so the total mass is 1.
    Intensity normalized() const;
    Intensity scaled(double factor) const;

    /// Value at the right edge, for extending hazards beyond the domain.
    double terminal_value() const { return value(1.0 - 1e-12); }

    const std::vector<double>& breaks() const { return breaks_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<std::vector<double>>& coefficients() const { return coeffs_; }
    double param_a() const { return a_; }
    double param_b() const { return b_; }
    double param_alpha() const { return alpha_; }

private:
    Intensity() = default;

    Kind kind_ = Kind::Constant;
    std::vector<double> breaks_;               // piecewise kinds
    std::vector<double> values_;               // piecewise-constant levels
    std::vector<std::vector<double>> coeffs_;  // piecewise-polynomial
    double a_ = 1.0, b_ = 0.0, alpha_ = 1.0;   // sqrt-affine-power
};

/// Intensity on [0,1)^k whose square root is a constant plus separable
/// power-profile bumps on disjoint dyadic cubes:
///   sqrt(s)(x) = base + sum_i amp_i * prod_d (1 - |2t_d - 1|)^alpha_i,
/// t_d the local coordinate within spike cube i.
class CubeIntensity {
public:
    struct Spike {
        DyadicCube cube;
        double amplitude;
        double exponent;
    };

    CubeIntensity(unsigned k, double sqrt_base, std::vector<Spike> spikes);

    unsigned dim() const { return k_; }
    double sqrt_base() const { return base_; }
    const std::vector<Spike>& spikes() const { return spikes_; }

    double value(const std::vector<double>& x) const;
    double integral(const CubeCell& cell) const;       // ∫ s
    double sqrt_integral(const CubeCell& cell) const;  // ∫ sqrt(s)
    double mass() const;

private:
    double cube_integral(const DyadicCube& c) const;
    double cube_sqrt_integral(const DyadicCube& c) const;

    unsigned k_;
    double base_;
    std::vector<Spike> spikes_;
};

}  // namespace phe
