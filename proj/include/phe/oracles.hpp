#pragma once

#include <cstdint>
#include <vector>

#include "phe/enumerate.hpp"
#include "phe/selection.hpp"

namespace phe {

struct RiskEstimate {
    double mean = 0.0;
    double stderr = 0.0;
    std::uint64_t replicates = 0;
    std::vector<double> per_replicate;

    static RiskEstimate from_samples(const std::vector<double>& samples);
};

struct TailPoint {
    double x = 0.0;
    double bound = 0.0;  // e^-x
    double upper_threshold = 0.0;
    double lower_threshold = 0.0;
    double upper_freq = 0.0;
    double lower_freq = 0.0;
    double slack = 0.0;  // 3 binomial standard errors of the bound
    bool upper_pass = false;
    bool lower_pass = false;
};

struct TailCheck {
    std::vector<TailPoint> points;
    std::uint64_t replicates = 0;
    double pilot_mean = 0.0;  // pilot estimate of E[chi2]
    bool pass = false;
};

enum class TailLaw { Poisson, Gamma };

/// Deviation check for chi2(m) = sum_I (sqrt(X_I) - sqrt(E X_I))^2 with
/// independent Poisson or Gamma coordinates (Bernstein constants 1, 1):
/// upward threshold E[chi2] + K^2 (2 sqrt(2|m|x) + x) with K^2 = 2, downward
/// threshold E[chi2] - 2 K^2 sqrt(2|m|x); both exceedances must stay under
/// e^-x up to Monte Carlo slack. E[chi2] comes from an independent pilot
/// batch of the same size.
TailCheck chi2_tail_check_independent(TailLaw law, const std::vector<double>& means,
                                      const std::vector<double>& x_grid,
                                      std::uint64_t replicates, std::uint64_t seed);

/// Deviation check for aggregated one-hot rows: `rows` i.i.d. rows, row j
/// lands in cell I with probability q_I (sum <= 1, at most one cell per
/// row). Threshold 8|m| + 202 x (row sums bounded by 1, variance bounded by
/// the mean).
TailCheck chi2_tail_check_rows(const std::vector<double>& cell_probs, std::uint64_t rows,
                               const std::vector<double>& x_grid, std::uint64_t replicates,
                               std::uint64_t seed);

/// Greedy split of a nondecreasing f on {1..n} into at most D intervals with
/// per-point sqrt-error at most R/D, R = sqrt(f_n) - sqrt(f_1). The returned
/// squared error is guaranteed <= n R^2 / D^2 with at most D blocks.
struct MonotoneFit {
    VectorPartition partition;
    std::vector<double> levels;
    double sq_error = 0.0;
    double bound = 0.0;
};

MonotoneFit monotone_partition(const std::vector<double>& f, std::size_t D);

/// Index of the family member whose fitted histogram lands closest to the
/// true intensity in realized squared distance. Test-side oracle only.
template <typename P, typename Obs, typename S>
std::size_t exhaustive_best_model(const std::vector<P>& family, const Obs& obs, const S& s) {
    if (family.empty()) throw std::invalid_argument("exhaustive_best_model: empty family");
    if (family.size() > 1000)
        throw TooLargeError("exhaustive_best_model: family too large for brute force");
    std::size_t best = 0;
    double best_risk = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const double risk = hellinger_sq_to_intensity(fit(family[i], obs), s);
        if (i == 0 || risk < best_risk) {
            best = i;
            best_risk = risk;
        }
    }
    return best;
}

struct OracleVerdict {
    RiskEstimate risk;
    double rhs = 0.0;           // risk-bound right-hand side
    double inf_bias_pen = 0.0;  // inf_m (bias^2 + pen)
    double sigma = 0.0;         // truncated weight sum
    double ratio = 0.0;         // mean selected risk / best per-model mean risk
    std::size_t best_model = 0;
    std::vector<double> per_model_mean_risk;
    bool pass = false;
};

/// Monte Carlo check of the selected estimator's risk bound:
/// mean + 2 stderr <= 390 (inf_m {H2(s,S_m) + pen(m)} + a b Sigma^2 / 2) + eps,
/// with (a, b) the framework's deviation constants. Also reports the sharper
/// ratio of the selected risk to the best single-model risk, from the same
/// replicates.
template <typename P, typename S, typename SimFn>
OracleVerdict oracle_inequality_check(const std::vector<P>& family, const S& s,
                                      const WeightScheme& ws, const PenaltySpec& spec,
                                      SimFn&& simulate, std::uint64_t replicates,
                                      std::uint64_t seed, unsigned workers = 1) {
    if (family.empty()) throw std::invalid_argument("oracle check: empty family");
    spec.validate();

    OracleVerdict verdict;
    std::vector<CellIntegrals> cis;
    cis.reserve(family.size());
    for (const auto& m : family) cis.push_back(cell_integrals(m, s));

    verdict.inf_bias_pen = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < family.size(); ++i) {
        const double b = bias_sq_from_integrals(cis[i]);
        const double p = penalty(family[i].size(), ws.weight(family[i]), spec);
        verdict.inf_bias_pen = std::min(verdict.inf_bias_pen, b + p);
    }
    verdict.sigma = truncated_sigma(ws, family);

    std::vector<double> selected_risk(replicates, 0.0);
    std::vector<std::vector<double>> model_risk(replicates);
    SelectOptions sopts;
    sopts.keep_tests = false;
    parallel_for(replicates, workers, [&](std::size_t r) {
        const auto obs = simulate(derive_seed(seed, r));
        auto res = select(family, obs, spec, ws, sopts);
        selected_risk[r] = hellinger_sq_to_intensity(res.estimate, cis[res.summary.selected]);
        model_risk[r].resize(family.size());
        for (std::size_t i = 0; i < family.size(); ++i)
            model_risk[r][i] = hellinger_sq_to_intensity(res.fits[i], cis[i]);
    });

    verdict.risk = RiskEstimate::from_samples(selected_risk);
    verdict.per_model_mean_risk.assign(family.size(), 0.0);
    for (std::size_t i = 0; i < family.size(); ++i) {
        KahanSum acc;
        for (std::uint64_t r = 0; r < replicates; ++r) acc.add(model_risk[r][i]);
        verdict.per_model_mean_risk[i] = acc.value() / static_cast<double>(replicates);
    }
    verdict.best_model = 0;
    for (std::size_t i = 1; i < family.size(); ++i)
        if (verdict.per_model_mean_risk[i] < verdict.per_model_mean_risk[verdict.best_model])
            verdict.best_model = i;

    const auto abc = spec.deviation_constants();
    verdict.rhs = 390.0 * (verdict.inf_bias_pen + abc[0] * abc[1] * verdict.sigma * verdict.sigma / 2.0) +
                  spec.epsilon;
    verdict.pass = verdict.risk.mean + 2.0 * verdict.risk.stderr <= verdict.rhs;
    const double best = verdict.per_model_mean_risk[verdict.best_model];
    verdict.ratio = best > 0.0 ? verdict.risk.mean / best
                               : (verdict.risk.mean == 0.0 ? 1.0
                                                           : std::numeric_limits<double>::infinity());
    return verdict;
}

}  // namespace phe
