#pragma once

#include <cmath>
#include <vector>

#include "phe/errors.hpp"
#include "phe/intensity.hpp"
#include "phe/observations.hpp"
#include "phe/partition.hpp"
#include "phe/summation.hpp"

namespace phe {

/// Piecewise-constant nonnegative function on a partition; one level per
/// cell, square roots cached for the selection loop.
template <typename P>
struct Histogram {
    P partition;
    std::vector<double> levels;
    std::vector<double> sqrt_levels;

    void refresh_sqrt() {
        sqrt_levels.resize(levels.size());
        for (std::size_t i = 0; i < levels.size(); ++i) sqrt_levels[i] = std::sqrt(levels[i]);
    }
};

// Reference (lambda) measure of one cell, by cell kind.
inline double cell_lambda(const IntervalCell& c) { return c.length(); }
inline double cell_lambda(const CubeCell& c) { return c.volume(); }
inline double cell_lambda(const std::vector<std::uint32_t>& b) {
    return static_cast<double>(b.size());
}

// Cell integrals of an intensity and of its square root, by intensity kind.
inline double cell_integral(const Intensity& s, const IntervalCell& c) {
    return s.integral(c.lo.value(), c.hi.value());
}
inline double cell_sqrt_integral(const Intensity& s, const IntervalCell& c) {
    return s.sqrt_integral(c.lo.value(), c.hi.value());
}
inline double cell_integral(const CubeIntensity& s, const CubeCell& c) { return s.integral(c); }
inline double cell_sqrt_integral(const CubeIntensity& s, const CubeCell& c) {
    return s.sqrt_integral(c);
}
inline double cell_integral(const std::vector<double>& s, const std::vector<std::uint32_t>& b) {
    KahanSum acc;
    for (auto i : b) acc.add(s.at(i));
    return acc.value();
}
inline double cell_sqrt_integral(const std::vector<double>& s,
                                 const std::vector<std::uint32_t>& b) {
    KahanSum acc;
    for (auto i : b) acc.add(std::sqrt(s.at(i)));
    return acc.value();
}
inline double intensity_mass(const Intensity& s) { return s.mass(); }
inline double intensity_mass(const CubeIntensity& s) { return s.mass(); }
inline double intensity_mass(const std::vector<double>& s) {
    KahanSum acc;
    for (double v : s) acc.add(v);
    return acc.value();
}

/// The histogram estimator on m: level = N(I)/M(I) with the 0/0 = 0
/// convention. A cell with observed mass but zero reference measure is a
/// support violation.
template <typename P, typename Obs>
Histogram<P> fit(const P& m, const Obs& obs) {
    Histogram<P> h{m, {}, {}};
    h.levels.reserve(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double count = obs.count(m.cell(i));
        const double mass = obs.measure(m.cell(i));
        if (mass <= 0.0) {
            if (count > 0.0)
                throw ViolatedSupportError("fit: cell has observations but zero measure");
            h.levels.push_back(0.0);
        } else {
            h.levels.push_back(count / mass);
        }
    }
    h.refresh_sqrt();
    return h;
}

/// Deterministic approximant with levels (∫_I s dλ) / λ(I); equals s when s
/// is constant on every cell.
template <typename P, typename S>
Histogram<P> mean_approximant(const P& m, const S& s) {
    Histogram<P> h{m, {}, {}};
    h.levels.reserve(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double lam = cell_lambda(m.cell(i));
        h.levels.push_back(lam > 0.0 ? cell_integral(s, m.cell(i)) / lam : 0.0);
    }
    h.refresh_sqrt();
    return h;
}

/// Squared Hellinger-type distance between two histograms over the same
/// domain, evaluated exactly on the join of their partitions against the
/// measure provider M (obs.measure or a deterministic measure).
template <typename P, typename M>
double hellinger_sq(const Histogram<P>& a, const Histogram<P>& b, const M& mp) {
    const auto J = join_with_parents(a.partition, b.partition);
    KahanSum acc;
    for (std::size_t idx = 0; idx < J.joined.size(); ++idx) {
        const auto [pa, pb] = J.parents[idx];
        const double d = a.sqrt_levels[pa] - b.sqrt_levels[pb];
        if (d != 0.0) acc.add(d * d * mp.measure(J.joined.cell(idx)));
    }
    return acc.value();
}

/// Per-cell integrals of a true intensity over a partition, cached so risks
/// over many replicates do not repeat quadrature.
struct CellIntegrals {
    std::vector<double> lambda;
    std::vector<double> mass;       // ∫_I s dλ
    std::vector<double> sqrt_mass;  // ∫_I sqrt(s) dλ
    double total_mass = 0.0;
};

template <typename P, typename S>
CellIntegrals cell_integrals(const P& m, const S& s) {
    CellIntegrals ci;
    ci.lambda.reserve(m.size());
    ci.mass.reserve(m.size());
    ci.sqrt_mass.reserve(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        ci.lambda.push_back(cell_lambda(m.cell(i)));
        ci.mass.push_back(cell_integral(s, m.cell(i)));
        ci.sqrt_mass.push_back(cell_sqrt_integral(s, m.cell(i)));
    }
    ci.total_mass = intensity_mass(s);
    return ci;
}

/// H²(h, s) against the deterministic reference measure (density, Poisson
/// and vector frameworks): ∫ (sqrt(h) - sqrt(s))² dλ.
template <typename P>
double hellinger_sq_to_intensity(const Histogram<P>& h, const CellIntegrals& ci) {
    KahanSum acc;
    acc.add(ci.total_mass);
    for (std::size_t i = 0; i < h.levels.size(); ++i) {
        acc.add(h.levels[i] * ci.lambda[i]);
        acc.add(-2.0 * h.sqrt_levels[i] * ci.sqrt_mass[i]);
    }
    return std::max(0.0, acc.value());
}

template <typename P, typename S>
double hellinger_sq_to_intensity(const Histogram<P>& h, const S& s) {
    return hellinger_sq_to_intensity(h, cell_integrals(h.partition, s));
}

/// Smallest squared distance from s to histograms on m under the reference
/// measure: ∫ s dλ - Σ_I (∫_I sqrt(s))² / λ(I), attained by the
/// L2-projection of sqrt(s).
inline double bias_sq_from_integrals(const CellIntegrals& ci) {
    KahanSum acc;
    acc.add(ci.total_mass);
    for (std::size_t i = 0; i < ci.lambda.size(); ++i)
        if (ci.lambda[i] > 0.0) acc.add(-ci.sqrt_mass[i] * ci.sqrt_mass[i] / ci.lambda[i]);
    return std::max(0.0, acc.value());
}

template <typename P, typename S>
double bias_sq(const P& m, const S& s) {
    return bias_sq_from_integrals(cell_integrals(m, s));
}

/// Upper bound for the expected squared bias in the aggregated
/// counting-process framework: the at-risk process is at most n, so
/// H²(s, S_m) <= n inf_t ∫ (sqrt(s) - sqrt(t))² dλ.
template <typename P, typename S>
double bias_upper_sq(const P& m, const S& s, std::uint64_t n) {
    return static_cast<double>(n) * bias_sq(m, s);
}

/// H²(h, s) for the survival framework, where the integrating measure is the
/// random at-risk measure of the sample. Requires a piecewise-constant (or
/// constant) true hazard.
double hellinger_sq_to_hazard(const Histogram<IntervalPartition>& h, const Intensity& s,
                              const SurvivalObs& obs);

}  // namespace phe
