#include "phe/intensity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phe/errors.hpp"
#include "phe/summation.hpp"

namespace phe {

namespace {

double simpson_rule(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                   double fb, double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson_rule(a, fa, m, fm, flm);
    const double right = simpson_rule(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0) throw QuadratureError("adaptive_simpson: depth limit reached");
    return simpson_rec(f, a, fa, m, fm, lm, flm, left, tol * 0.5, depth - 1) +
           simpson_rec(f, m, fm, b, fb, rm, frm, right, tol * 0.5, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double tol) {
    if (hi <= lo) return 0.0;
    const double m = 0.5 * (lo + hi);
    const double fa = f(lo), fb = f(hi), fm = f(m);
    const double whole = simpson_rule(lo, fa, hi, fb, fm);
    return simpson_rec(f, lo, fa, hi, fb, m, fm, whole, tol, 48);
}

// ---------------------------------------------------------------------------
// Intensity
// ---------------------------------------------------------------------------

Intensity Intensity::constant(double c) {
    if (c < 0.0) throw std::invalid_argument("intensity must be nonnegative");
    Intensity s;
    s.kind_ = Kind::Constant;
    s.values_ = {c};
    return s;
}

Intensity Intensity::piecewise_constant(std::vector<double> breaks, std::vector<double> values) {
    if (breaks.size() < 2 || breaks.front() != 0.0 || breaks.back() != 1.0 ||
        values.size() + 1 != breaks.size())
        throw std::invalid_argument("piecewise_constant: bad breakpoints");
    for (std::size_t i = 1; i < breaks.size(); ++i)
        if (!(breaks[i - 1] < breaks[i]))
            throw std::invalid_argument("piecewise_constant: breaks not increasing");
    for (double v : values)
        if (v < 0.0) throw std::invalid_argument("intensity must be nonnegative");
    Intensity s;
    s.kind_ = Kind::PiecewiseConstant;
    s.breaks_ = std::move(breaks);
    s.values_ = std::move(values);
    return s;
}

Intensity Intensity::piecewise_polynomial(std::vector<double> breaks,
                                          std::vector<std::vector<double>> coeffs) {
    if (breaks.size() < 2 || breaks.front() != 0.0 || breaks.back() != 1.0 ||
        coeffs.size() + 1 != breaks.size())
        throw std::invalid_argument("piecewise_polynomial: bad breakpoints");
    for (std::size_t i = 1; i < breaks.size(); ++i)
        if (!(breaks[i - 1] < breaks[i]))
            throw std::invalid_argument("piecewise_polynomial: breaks not increasing");
    Intensity s;
    s.kind_ = Kind::PiecewisePolynomial;
    s.breaks_ = std::move(breaks);
    s.coeffs_ = std::move(coeffs);
    return s;
}

Intensity Intensity::sqrt_affine_power(double a, double b, double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("sqrt_affine_power: alpha must be positive");
    if (a < 0.0 || a + b < 0.0)
        throw std::invalid_argument("sqrt_affine_power: square root goes negative");
    Intensity s;
    s.kind_ = Kind::SqrtAffinePower;
    s.a_ = a;
    s.b_ = b;
    s.alpha_ = alpha;
    return s;
}

namespace {

double poly_eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t i = c.size(); i > 0; --i) v = v * x + c[i - 1];
    return v;
}

double poly_integral(const std::vector<double>& c, double lo, double hi) {
    double vl = 0.0, vh = 0.0;
    for (std::size_t i = c.size(); i > 0; --i) {
        const double k = static_cast<double>(i);
        vl = vl * lo + c[i - 1] / k;
        vh = vh * hi + c[i - 1] / k;
    }
    return vh * hi - vl * lo;
}

}  // namespace

double Intensity::value(double x) const {
    switch (kind_) {
        case Kind::Constant:
            return values_[0];
        case Kind::PiecewiseConstant:
        case Kind::PiecewisePolynomial: {
            auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
            std::size_t piece = it == breaks_.begin()
                                    ? 0
                                    : static_cast<std::size_t>(it - breaks_.begin()) - 1;
            const std::size_t pieces =
                kind_ == Kind::PiecewiseConstant ? values_.size() : coeffs_.size();
            if (piece >= pieces) piece = pieces - 1;
            return kind_ == Kind::PiecewiseConstant ? values_[piece]
                                                    : std::max(0.0, poly_eval(coeffs_[piece], x));
        }
        case Kind::SqrtAffinePower: {
            const double r = a_ + b_ * std::pow(x, alpha_);
            return r * r;
        }
    }
    return 0.0;
}

double Intensity::integral(double lo, double hi) const {
    if (hi <= lo) return 0.0;
    switch (kind_) {
        case Kind::Constant:
            return values_[0] * (hi - lo);
        case Kind::PiecewiseConstant: {
            KahanSum acc;
            for (std::size_t p = 0; p < values_.size(); ++p) {
                const double a = std::max(lo, breaks_[p]);
                const double b = std::min(hi, breaks_[p + 1]);
                if (b > a) acc.add(values_[p] * (b - a));
            }
            return acc.value();
        }
        case Kind::PiecewisePolynomial: {
            KahanSum acc;
            for (std::size_t p = 0; p < coeffs_.size(); ++p) {
                const double a = std::max(lo, breaks_[p]);
                const double b = std::min(hi, breaks_[p + 1]);
                if (b > a) acc.add(poly_integral(coeffs_[p], a, b));
            }
            return acc.value();
        }
        case Kind::SqrtAffinePower: {
            // (a + b x^alpha)^2 = a^2 + 2ab x^alpha + b^2 x^(2 alpha)
            auto pow_term = [&](double e, double x) { return std::pow(x, e + 1.0) / (e + 1.0); };
            return a_ * a_ * (hi - lo) +
                   2.0 * a_ * b_ * (pow_term(alpha_, hi) - pow_term(alpha_, lo)) +
                   b_ * b_ * (pow_term(2.0 * alpha_, hi) - pow_term(2.0 * alpha_, lo));
        }
    }
    return 0.0;
}

double Intensity::sqrt_integral(double lo, double hi) const {
    if (hi <= lo) return 0.0;
    switch (kind_) {
        case Kind::Constant:
            return std::sqrt(values_[0]) * (hi - lo);
        case Kind::PiecewiseConstant: {
            KahanSum acc;
            for (std::size_t p = 0; p < values_.size(); ++p) {
                const double a = std::max(lo, breaks_[p]);
                const double b = std::min(hi, breaks_[p + 1]);
                if (b > a) acc.add(std::sqrt(values_[p]) * (b - a));
            }
            return acc.value();
        }
        case Kind::PiecewisePolynomial: {
            KahanSum acc;
            for (std::size_t p = 0; p < coeffs_.size(); ++p) {
                const double a = std::max(lo, breaks_[p]);
                const double b = std::min(hi, breaks_[p + 1]);
                if (b > a) {
                    const auto& c = coeffs_[p];
                    acc.add(adaptive_simpson(
                        [&c](double x) { return std::sqrt(std::max(0.0, poly_eval(c, x))); }, a, b,
                        1e-10));
                }
            }
            return acc.value();
        }
        case Kind::SqrtAffinePower: {
            const double e = alpha_ + 1.0;
            return a_ * (hi - lo) + b_ * (std::pow(hi, e) - std::pow(lo, e)) / e;
        }
    }
    return 0.0;
}

double Intensity::inverse_cdf(double u) const {
    if (u < 0.0 || u > mass() * (1.0 + 1e-12))
        throw std::invalid_argument("inverse_cdf: u outside [0, mass]");
    if (kind_ == Kind::Constant) return values_[0] > 0.0 ? u / values_[0] : 0.0;
    if (kind_ == Kind::PiecewiseConstant) {
        double cum = 0.0;
        for (std::size_t p = 0; p < values_.size(); ++p) {
            const double piece = values_[p] * (breaks_[p + 1] - breaks_[p]);
            if (u <= cum + piece || p + 1 == values_.size()) {
                if (values_[p] <= 0.0) return breaks_[p];
                return std::min(breaks_[p + 1], breaks_[p] + (u - cum) / values_[p]);
            }
            cum += piece;
        }
        return 1.0;
    }
    // monotone bisection, then a Newton polish
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < u)
            lo = mid;
        else
            hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        const double den = value(x);
        if (den <= 0.0) break;
        x -= (cdf(x) - u) / den;
        x = std::clamp(x, lo, hi);
    }
    return std::clamp(x, 0.0, 1.0);
}

Intensity Intensity::scaled(double factor) const {
    if (factor < 0.0) throw std::invalid_argument("scaled: negative factor");
    Intensity s = *this;
    switch (kind_) {
        case Kind::Constant:
        case Kind::PiecewiseConstant:
            for (auto& v : s.values_) v *= factor;
            break;
        case Kind::PiecewisePolynomial:
            for (auto& piece : s.coeffs_)
                for (auto& c : piece) c *= factor;
            break;
        case Kind::SqrtAffinePower: {
            const double r = std::sqrt(factor);
            s.a_ *= r;
            s.b_ *= r;
            break;
        }
    }
    return s;
}

Intensity Intensity::normalized() const {
    const double m = mass();
    if (m <= 0.0) throw std::invalid_argument("normalized: zero mass");
    return scaled(1.0 / m);
}

// ---------------------------------------------------------------------------
// CubeIntensity
// ---------------------------------------------------------------------------

namespace {

/// ∫ (1 - |2t - 1|)^p dt over [u, v] within [0,1].
double profile_integral(double p, double u, double v) {
    u = std::clamp(u, 0.0, 1.0);
    v = std::clamp(v, 0.0, 1.0);
    if (v <= u) return 0.0;
    auto left = [&](double a, double b) {  // ∫ (2t)^p over [a,b], b <= 1/2
        return (std::pow(2.0 * b, p + 1.0) - std::pow(2.0 * a, p + 1.0)) / (2.0 * (p + 1.0));
    };
    auto right = [&](double a, double b) {  // ∫ (2-2t)^p over [a,b], a >= 1/2
        return (std::pow(2.0 - 2.0 * a, p + 1.0) - std::pow(2.0 - 2.0 * b, p + 1.0)) /
               (2.0 * (p + 1.0));
    };
    double acc = 0.0;
    if (u < 0.5) acc += left(u, std::min(v, 0.5));
    if (v > 0.5) acc += right(std::max(u, 0.5), v);
    return acc;
}

}  // namespace

CubeIntensity::CubeIntensity(unsigned k, double sqrt_base, std::vector<Spike> spikes)
    : k_(k), base_(sqrt_base), spikes_(std::move(spikes)) {
    if (k_ < 1) throw std::invalid_argument("CubeIntensity: dimension must be >= 1");
    if (base_ < 0.0) throw std::invalid_argument("CubeIntensity: negative square root");
    for (const auto& sp : spikes_) {
        if (sp.cube.dim() != k_) throw std::invalid_argument("CubeIntensity: spike dimension");
        if (base_ + sp.amplitude < 0.0)
            throw std::invalid_argument("CubeIntensity: square root goes negative");
        if (sp.exponent <= 0.0) throw std::invalid_argument("CubeIntensity: bad exponent");
    }
    for (std::size_t i = 0; i < spikes_.size(); ++i)
        for (std::size_t j = i + 1; j < spikes_.size(); ++j)
            if (!cube_disjoint(spikes_[i].cube, spikes_[j].cube))
                throw std::invalid_argument("CubeIntensity: spikes must be disjoint");
}

double CubeIntensity::value(const std::vector<double>& x) const {
    double r = base_;
    for (const auto& sp : spikes_) {
        double prof = 1.0;
        bool inside = true;
        for (unsigned d = 0; d < k_ && inside; ++d) {
            const double lo = sp.cube.lo(d), hi = sp.cube.hi(d);
            if (x[d] < lo || x[d] >= hi) {
                inside = false;
                break;
            }
            const double t = (x[d] - lo) / (hi - lo);
            prof *= std::pow(1.0 - std::abs(2.0 * t - 1.0), sp.exponent);
        }
        if (inside) r += sp.amplitude * prof;
    }
    return r * r;
}

double CubeIntensity::cube_integral(const DyadicCube& c) const {
    // s = base^2 + sum over spikes of (2 base A P + A^2 P^2) on the spike cube
    double acc = base_ * base_ * c.volume();
    for (const auto& sp : spikes_) {
        DyadicCube overlap;
        if (cube_contains(sp.cube, c))
            overlap = c;
        else if (cube_contains(c, sp.cube))
            overlap = sp.cube;
        else
            continue;
        double p1 = 1.0, p2 = 1.0;
        for (unsigned d = 0; d < k_; ++d) {
            const double lo = sp.cube.lo(d), hi = sp.cube.hi(d);
            const double u = (overlap.lo(d) - lo) / (hi - lo);
            const double v = (overlap.hi(d) - lo) / (hi - lo);
            p1 *= (hi - lo) * profile_integral(sp.exponent, u, v);
            p2 *= (hi - lo) * profile_integral(2.0 * sp.exponent, u, v);
        }
        acc += 2.0 * base_ * sp.amplitude * p1 + sp.amplitude * sp.amplitude * p2;
    }
    return acc;
}

double CubeIntensity::cube_sqrt_integral(const DyadicCube& c) const {
    double acc = base_ * c.volume();
    for (const auto& sp : spikes_) {
        DyadicCube overlap;
        if (cube_contains(sp.cube, c))
            overlap = c;
        else if (cube_contains(c, sp.cube))
            overlap = sp.cube;
        else
            continue;
        double p1 = 1.0;
        for (unsigned d = 0; d < k_; ++d) {
            const double lo = sp.cube.lo(d), hi = sp.cube.hi(d);
            const double u = (overlap.lo(d) - lo) / (hi - lo);
            const double v = (overlap.hi(d) - lo) / (hi - lo);
            p1 *= (hi - lo) * profile_integral(sp.exponent, u, v);
        }
        acc += sp.amplitude * p1;
    }
    return acc;
}

double CubeIntensity::integral(const CubeCell& cell) const {
    double acc = cube_integral(cell.outer);
    for (const auto& h : cell.holes) acc -= cube_integral(h);
    return acc;
}

double CubeIntensity::sqrt_integral(const CubeCell& cell) const {
    double acc = cube_sqrt_integral(cell.outer);
    for (const auto& h : cell.holes) acc -= cube_sqrt_integral(h);
    return acc;
}

double CubeIntensity::mass() const {
    return cube_integral(DyadicCube::root(k_));
}

}  // namespace phe
