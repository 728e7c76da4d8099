#include "phe/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phe {

RiskEstimate RiskEstimate::from_samples(const std::vector<double>& samples) {
    RiskEstimate est;
    est.replicates = samples.size();
    est.per_replicate = samples;
    if (samples.empty()) return est;
    KahanSum sum;
    for (double v : samples) sum.add(v);
    est.mean = sum.value() / static_cast<double>(samples.size());
    if (samples.size() > 1) {
        KahanSum sq;
        for (double v : samples) sq.add((v - est.mean) * (v - est.mean));
        const double var = sq.value() / static_cast<double>(samples.size() - 1);
        est.stderr = std::sqrt(var / static_cast<double>(samples.size()));
    }
    return est;
}

namespace {

double chi2_of(const std::vector<double>& values, const std::vector<double>& sqrt_means) {
    KahanSum acc;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = std::sqrt(values[i]) - sqrt_means[i];
        acc.add(d * d);
    }
    return acc.value();
}

TailCheck finish_tail_check(std::vector<double> main_draws, double pilot_mean, double m_size,
                            double kk2,  // K^2 kappa, or 0 for the row version
                            double row_threshold_a, double row_threshold_b,
                            const std::vector<double>& x_grid, std::uint64_t replicates) {
    TailCheck check;
    check.replicates = replicates;
    check.pilot_mean = pilot_mean;
    check.pass = true;
    for (double x : x_grid) {
        TailPoint pt;
        pt.x = x;
        pt.bound = std::exp(-x);
        if (kk2 > 0.0) {
            pt.upper_threshold = pilot_mean + kk2 * (2.0 * std::sqrt(2.0 * m_size * x) + x);
            pt.lower_threshold = pilot_mean - 2.0 * kk2 * std::sqrt(2.0 * m_size * x);
        } else {
            pt.upper_threshold = row_threshold_a * m_size + row_threshold_b * x;
            pt.lower_threshold = -std::numeric_limits<double>::infinity();
        }
        std::uint64_t up = 0, down = 0;
        for (double v : main_draws) {
            if (v >= pt.upper_threshold) ++up;
            if (v <= pt.lower_threshold) ++down;
        }
        pt.upper_freq = static_cast<double>(up) / static_cast<double>(replicates);
        pt.lower_freq = static_cast<double>(down) / static_cast<double>(replicates);
        pt.slack = 3.0 * std::sqrt(pt.bound * (1.0 - pt.bound) / static_cast<double>(replicates));
        pt.upper_pass = pt.upper_freq <= pt.bound + pt.slack;
        pt.lower_pass = pt.lower_freq <= pt.bound + pt.slack;
        check.pass = check.pass && pt.upper_pass && pt.lower_pass;
        check.points.push_back(pt);
    }
    return check;
}

}  // namespace

TailCheck chi2_tail_check_independent(TailLaw law, const std::vector<double>& means,
                                      const std::vector<double>& x_grid,
                                      std::uint64_t replicates, std::uint64_t seed) {
    if (replicates < 1000)
        throw std::invalid_argument("chi2_tail_check: need at least 1000 replicates");
    for (double m : means)
        if (m < 0.0) throw std::invalid_argument("chi2_tail_check: negative mean");

    std::vector<double> sqrt_means(means.size());
    for (std::size_t i = 0; i < means.size(); ++i) sqrt_means[i] = std::sqrt(means[i]);

    auto draw_chi2 = [&](Rng& rng) {
        std::vector<double> values(means.size());
        for (std::size_t i = 0; i < means.size(); ++i)
            values[i] = law == TailLaw::Poisson ? static_cast<double>(rng.poisson(means[i]))
                                                : (means[i] == 0.0 ? 0.0 : rng.gamma(means[i]));
        return chi2_of(values, sqrt_means);
    };

    Rng pilot_rng(derive_seed(seed, 0, 1));
    KahanSum pilot;
    for (std::uint64_t r = 0; r < replicates; ++r) pilot.add(draw_chi2(pilot_rng));
    const double pilot_mean = pilot.value() / static_cast<double>(replicates);

    Rng main_rng(derive_seed(seed, 0, 2));
    std::vector<double> draws(replicates);
    for (std::uint64_t r = 0; r < replicates; ++r) draws[r] = draw_chi2(main_rng);

    // kappa = tau = 1 for Poisson and Gamma(mean, 1), so K^2 kappa = 2
    return finish_tail_check(std::move(draws), pilot_mean, static_cast<double>(means.size()),
                             2.0, 0.0, 0.0, x_grid, replicates);
}

TailCheck chi2_tail_check_rows(const std::vector<double>& cell_probs, std::uint64_t rows,
                               const std::vector<double>& x_grid, std::uint64_t replicates,
                               std::uint64_t seed) {
    if (replicates < 1000)
        throw std::invalid_argument("chi2_tail_check: need at least 1000 replicates");
    double total = 0.0;
    for (double q : cell_probs) {
        if (q < 0.0) throw std::invalid_argument("chi2_tail_check: negative probability");
        total += q;
    }
    if (total > 1.0 + 1e-12)
        throw std::invalid_argument("chi2_tail_check: cell probabilities exceed 1");

    std::vector<double> sqrt_means(cell_probs.size());
    for (std::size_t i = 0; i < cell_probs.size(); ++i)
        sqrt_means[i] = std::sqrt(static_cast<double>(rows) * cell_probs[i]);
    std::vector<double> cum(cell_probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < cell_probs.size(); ++i) {
        acc += cell_probs[i];
        cum[i] = acc;
    }

    auto draw_chi2 = [&](Rng& rng) {
        std::vector<double> counts(cell_probs.size(), 0.0);
        for (std::uint64_t j = 0; j < rows; ++j) {
            const double u = rng.uniform();
            const auto it = std::lower_bound(cum.begin(), cum.end(), u);
            if (it != cum.end()) counts[static_cast<std::size_t>(it - cum.begin())] += 1.0;
        }
        return chi2_of(counts, sqrt_means);
    };

    Rng pilot_rng(derive_seed(seed, 0, 1));
    KahanSum pilot;
    for (std::uint64_t r = 0; r < replicates; ++r) pilot.add(draw_chi2(pilot_rng));
    const double pilot_mean = pilot.value() / static_cast<double>(replicates);

    Rng main_rng(derive_seed(seed, 0, 2));
    std::vector<double> draws(replicates);
    for (std::uint64_t r = 0; r < replicates; ++r) draws[r] = draw_chi2(main_rng);

    return finish_tail_check(std::move(draws), pilot_mean,
                             static_cast<double>(cell_probs.size()), 0.0, 8.0, 202.0, x_grid,
                             replicates);
}

MonotoneFit monotone_partition(const std::vector<double>& f, std::size_t D) {
    const std::size_t n = f.size();
    if (n == 0) throw std::invalid_argument("monotone_partition: empty input");
    if (D < 1 || D > n) throw std::invalid_argument("monotone_partition: D must be in {1..n}");
    for (std::size_t i = 0; i < n; ++i) {
        if (f[i] < 0.0) throw std::invalid_argument("monotone_partition: negative value");
        if (i > 0 && f[i] < f[i - 1])
            throw std::invalid_argument("monotone_partition: f is not nondecreasing");
    }

    const double R = std::sqrt(f[n - 1]) - std::sqrt(f[0]);
    const double step = R / static_cast<double>(D);

    std::vector<std::uint32_t> cuts;
    std::vector<std::size_t> starts{0};
    std::size_t start = 0;
    for (std::size_t j = start + 1; j < n; ++j) {
        if (std::sqrt(f[j]) - std::sqrt(f[start]) > step) {
            cuts.push_back(static_cast<std::uint32_t>(j));
            starts.push_back(j);
            start = j;
        }
    }

    MonotoneFit out{VectorPartition::intervals(static_cast<std::uint32_t>(n), cuts), {}, 0.0, 0.0};
    out.levels.reserve(starts.size());
    for (auto s0 : starts) out.levels.push_back(f[s0]);
    KahanSum err;
    std::size_t block = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (block + 1 < starts.size() && i >= starts[block + 1]) ++block;
        const double d = std::sqrt(f[i]) - std::sqrt(out.levels[block]);
        err.add(d * d);
    }
    out.sq_error = err.value();
    out.bound = static_cast<double>(n) * R * R / (static_cast<double>(D) * static_cast<double>(D));
    return out;
}

}  // namespace phe
