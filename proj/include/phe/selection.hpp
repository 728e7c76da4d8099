#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phe/errors.hpp"
#include "phe/estimation.hpp"
#include "phe/parallel.hpp"
#include "phe/rng.hpp"
#include "phe/weights.hpp"

namespace phe {

enum class Framework { Density, Poisson, Vector, Counting };

std::string to_string(Framework f);
Framework framework_from_string(const std::string& name);

/// Framework-specific penalty: pen(m) = c1 |m| + c2 Delta_m, with the
/// coefficient floors coming from the per-framework risk bounds. Overrides
/// below the floor require the unsafe flag.
struct PenaltySpec {
    Framework framework = Framework::Density;
    double delta = 1.0;  // join-size constant of the family

    std::uint64_t n = 1;            // density: sample size
    double kappa = 1.0;             // vector: Bernstein scale
    double tau = 1.0;               // vector: Bernstein tail
    unsigned k = 1;                 // counting: max jumps per process
    double kappa_prime = 2.0;       // counting: variance constant
    double gamma_bound = 1.0;       // counting: known upper bound for ∫ s dλ

    double epsilon = 1.0;           // selection slack
    bool unsafe = false;
    std::optional<double> c1_override;
    std::optional<double> c2_override;

    static PenaltySpec density(std::uint64_t n, double delta = 1.0);
    static PenaltySpec poisson(double delta = 1.0);
    static PenaltySpec vector_counts(double kappa = 1.0, double tau = 1.0, double delta = 1.0);
    static PenaltySpec counting(unsigned k, double kappa_prime, double gamma_bound,
                                double delta = 1.0);

    /// K in the vector-framework penalty; sqrt(2) unless tau > kappa.
    double K_factor() const;

    double min_c1() const;
    double min_c2() const;
    /// 1/n for the density framework, 1 otherwise.
    double scale() const;
    double c1() const;
    double c2() const;
    void validate() const;

    /// (a, b, c) of the underlying deviation bound
    /// P[H² >= c|m| + b z] <= a e^-z, exposed for reporting only.
    std::array<double, 3> deviation_constants() const;
};

double penalty(std::size_t cells, double weight, const PenaltySpec& spec);

struct SelectOptions {
    unsigned workers = 1;
    bool randomize_ties = false;
    std::uint64_t tie_seed = 0;
    bool keep_tests = true;          // retain the full T and distance matrices
    std::size_t pair_cap = 2000000;  // explicit failure above this many pairs
};

/// Everything the selection run produced, minus the fitted estimates.
struct SelectionSummary {
    std::string framework;
    double gamma_bound = 0.0;  // counting framework only
    double epsilon = 0.0;
    std::size_t selected = 0;
    double min_criterion = 0.0;
    std::vector<double> penalties;
    std::vector<double> weights;
    std::vector<double> criterion;                   // D(m)
    std::vector<std::vector<std::uint32_t>> rejected;  // R_m as index lists
    std::vector<std::vector<double>> tests;            // T[m][m'], antisymmetric
    std::vector<std::vector<double>> distances;        // H²(s_m, s_m')
    bool randomized_ties = false;
    double wall_ms = 0.0;  // informational; never serialized
};

template <typename P>
struct SelectionResult {
    Histogram<P> estimate;
    SelectionSummary summary;
    std::vector<Histogram<P>> fits;
};

/// The pairwise test statistic between two fitted models:
/// H²(s_m, s_join) - H²(s_m', s_join) + 16 (pen(m) - pen(m')).
template <typename P, typename Obs>
double test_statistic(const P& m, const P& mp, const Obs& obs, const PenaltySpec& spec,
                      const WeightScheme& ws) {
    const auto a = fit(m, obs);
    const auto b = fit(mp, obs);
    const auto J = join_with_parents(m, mp);
    const auto joint = fit(J.joined, obs);
    KahanSum ha, hb;
    for (std::size_t idx = 0; idx < J.joined.size(); ++idx) {
        const auto [pa, pb] = J.parents[idx];
        const double mass = obs.measure(J.joined.cell(idx));
        const double da = a.sqrt_levels[pa] - joint.sqrt_levels[idx];
        const double db = b.sqrt_levels[pb] - joint.sqrt_levels[idx];
        if (da != 0.0) ha.add(da * da * mass);
        if (db != 0.0) hb.add(db * db * mass);
    }
    const double pen_a = penalty(m.size(), ws.weight(m), spec);
    const double pen_b = penalty(mp.size(), ws.weight(mp), spec);
    return (ha.value() - hb.value()) + 16.0 * (pen_a - pen_b);
}

/// Runs every pairwise test, forms the rejection sets and the criterion
/// D(m) = max over rejecting m' of H²(s_m, s_m'), and picks the first model
/// within epsilon/3 of the smallest criterion.
template <typename P, typename Obs>
SelectionResult<P> select(const std::vector<P>& family, const Obs& obs, const PenaltySpec& spec,
                          const WeightScheme& ws, const SelectOptions& opts = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    if (family.empty()) throw std::invalid_argument("select: empty family");
    spec.validate();

    const std::size_t nm = family.size();
    const std::size_t pairs = nm * (nm - 1) / 2;
    if (pairs > opts.pair_cap)
        throw TooLargeError("select: " + std::to_string(pairs) + " model pairs exceed the cap of " +
                            std::to_string(opts.pair_cap));

    SelectionSummary sum;
    sum.framework = to_string(spec.framework);
    if (spec.framework == Framework::Counting) sum.gamma_bound = spec.gamma_bound;
    sum.epsilon = spec.epsilon;
    sum.randomized_ties = opts.randomize_ties;

    sum.weights.resize(nm);
    sum.penalties.resize(nm);
    std::vector<Histogram<P>> fits;
    fits.reserve(nm);
    for (std::size_t i = 0; i < nm; ++i) {
        sum.weights[i] = ws.weight(family[i]);
        sum.penalties[i] = penalty(family[i].size(), sum.weights[i], spec);
        fits.push_back(fit(family[i], obs));
    }

    // pair list in fixed order; each worker writes only its own slots
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pair_list;
    pair_list.reserve(pairs);
    for (std::uint32_t i = 0; i < nm; ++i)
        for (std::uint32_t j = i + 1; j < nm; ++j) pair_list.emplace_back(i, j);

    std::vector<std::vector<double>> tests(nm, std::vector<double>(nm, 0.0));
    std::vector<std::vector<double>> dist(nm, std::vector<double>(nm, 0.0));

    parallel_for(pair_list.size(), opts.workers, [&](std::size_t p) {
        const auto [i, j] = pair_list[p];
        const auto J = join_with_parents(family[i], family[j]);
        const auto joint = fit(J.joined, obs);
        KahanSum hij, hji, direct;
        for (std::size_t idx = 0; idx < J.joined.size(); ++idx) {
            const auto [pi, pj] = J.parents[idx];
            const double mass = obs.measure(J.joined.cell(idx));
            if (mass == 0.0) continue;
            const double si = fits[i].sqrt_levels[pi];
            const double sj = fits[j].sqrt_levels[pj];
            const double sq = joint.sqrt_levels[idx];
            const double di = si - sq, dj = sj - sq, dd = si - sj;
            if (di != 0.0) hij.add(di * di * mass);
            if (dj != 0.0) hji.add(dj * dj * mass);
            if (dd != 0.0) direct.add(dd * dd * mass);
        }
        const double t = (hij.value() - hji.value()) +
                         16.0 * (sum.penalties[i] - sum.penalties[j]);
        tests[i][j] = t;
        tests[j][i] = -t;
        dist[i][j] = dist[j][i] = direct.value();
    });

    sum.rejected.assign(nm, {});
    for (std::uint32_t i = 0; i < nm; ++i)
        for (std::uint32_t j = i + 1; j < nm; ++j) {
            const double t = tests[i][j];
            if (t > 0.0) {
                sum.rejected[i].push_back(j);
            } else if (t < 0.0) {
                sum.rejected[j].push_back(i);
            } else if (opts.randomize_ties) {
                std::uint64_t s = opts.tie_seed + std::uint64_t{i} * nm + j;
                if (splitmix64(s) & 1u)
                    sum.rejected[i].push_back(j);
                else
                    sum.rejected[j].push_back(i);
            }
        }

    sum.criterion.assign(nm, 0.0);
    for (std::size_t m = 0; m < nm; ++m)
        for (auto r : sum.rejected[m]) sum.criterion[m] = std::max(sum.criterion[m], dist[m][r]);

    sum.min_criterion = sum.criterion[0];
    for (double d : sum.criterion) sum.min_criterion = std::min(sum.min_criterion, d);
    sum.selected = 0;
    for (std::size_t m = 0; m < nm; ++m)
        if (sum.criterion[m] <= sum.min_criterion + spec.epsilon / 3.0) {
            sum.selected = m;
            break;
        }

    if (opts.keep_tests) {
        sum.tests = std::move(tests);
        sum.distances = std::move(dist);
    }
    sum.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    Histogram<P> estimate = fits[sum.selected];
    return SelectionResult<P>{std::move(estimate), std::move(sum), std::move(fits)};
}

}  // namespace phe
