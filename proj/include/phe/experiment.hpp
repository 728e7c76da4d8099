#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "phe/observations.hpp"
#include "phe/oracles.hpp"
#include "phe/selection.hpp"
#include "phe/serialization.hpp"

namespace phe {

struct FamilyConfig {
    std::string kind = "interval";  // interval | regular | tree | vector_intervals | vector_spikes
    unsigned max_level = 3;
    unsigned min_level = 0;
    std::size_t max_cells = 8;
    unsigned max_splits = 4;
    std::size_t cap = 200000;
    std::size_t pair_cap = 2000000;
};

struct SpikeStudyConfig {
    unsigned k = 2;
    double sqrt_base = 0.5;
    std::vector<DyadicCube> cubes;  // the patch the bump lives on
    double amplitude = 2.0;
    double exponent = 1.0;
    double holder_R = 4.0;  // smoothness radius used in the closed-form bounds
    unsigned max_grid_level = 4;
};

struct ExperimentConfig {
    Framework framework = Framework::Density;

    std::optional<Intensity> intensity;  // 1-d frameworks
    std::uint64_t n = 1000;              // sample size (density, survival)
    unsigned poisson_grid_level = 8;

    std::vector<double> vector_means;
    VectorObs::Law vector_law = VectorObs::Law::Poisson;
    std::vector<std::uint64_t> vector_trials;
    double kappa = 1.0, tau = 1.0;

    CensorLaw censor = CensorLaw::none();
    unsigned k_jumps = 1;
    double kappa_prime = 2.0;
    double gamma_bound = 1.0;

    FamilyConfig family;
    std::string weights = "interval_grid";
    double delta = 1.0;
    std::optional<double> pen_c1, pen_c2;
    bool unsafe_penalties = false;
    std::optional<double> epsilon;
    bool randomize_ties = false;

    std::uint64_t replicates = 100;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string out_dir = "out";
    bool emit_tests = false;

    // rate study
    std::vector<std::uint64_t> n_grid;
    std::uint64_t bootstrap = 1000;
    double target_exponent = 0.0;

    // tail check
    std::string tail_law = "poisson";  // poisson | gamma | rows
    std::vector<double> tail_means;
    std::vector<double> tail_cell_probs;
    std::uint64_t tail_rows = 100;
    std::vector<double> tail_x_grid;

    SpikeStudyConfig spike;

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig from_file(const std::string& path);
    Json echo() const;

    PenaltySpec penalty_spec() const;
    WeightScheme weight_scheme() const;
    std::vector<IntervalPartition> interval_family() const;
    std::vector<VectorPartition> vector_family() const;
};

Intensity intensity_from_json(const nlohmann::json& j);
Json intensity_to_json(const Intensity& s);

struct ReplicateRow {
    std::uint64_t replicate = 0;
    std::uint64_t seed = 0;
    std::size_t selected = 0;
    std::size_t cells = 0;
    double risk = 0.0;
};

struct ExperimentRun {
    RiskEstimate risk;
    std::vector<ReplicateRow> rows;
    SelectionSummary first_summary;
    Json first_estimate;
    std::string first_step_csv;  // empty for the vector framework
};

/// End-to-end pipeline over seeded replicates: enumerate the family, fit,
/// select, score each replicate against the true intensity.
ExperimentRun run_replicates(const ExperimentConfig& cfg);

/// Runs and writes risk.json, replicates.csv, report.json, estimate.json and
/// estimate_step.csv under cfg.out_dir.
void run_experiment(const ExperimentConfig& cfg);

struct RateStudyResult {
    std::vector<std::uint64_t> n_grid;
    std::vector<double> mean_risks;
    std::vector<double> stderrs;
    double slope = 0.0;
    double intercept = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double target = 0.0;
};

RateStudyResult run_rate_study(const ExperimentConfig& cfg, bool write_files = true);
Json to_json(const RateStudyResult& r);

struct SpikeStudyResult {
    // best (bias^2 + |m| + weight) per sub-family, with the minimizing level
    double best_regular = 0.0, best_spike = 0.0, best_tree = 0.0;
    unsigned argmin_regular = 0, argmin_spike = 0, argmin_tree = 0;
    double bound_regular = 0.0, bound_spike = 0.0, bound_tree = 0.0;  // closed-form bounds
    std::string winner;
};

SpikeStudyResult run_spike_study(const ExperimentConfig& cfg, bool write_files = true);
Json to_json(const SpikeStudyResult& r);

TailCheck run_tail_check(const ExperimentConfig& cfg, bool write_files = true);
OracleVerdict run_oracle_check(const ExperimentConfig& cfg, bool write_files = true);

/// Family + weights + truncated weight sum dump for the enumerate verb.
Json enumerate_dump(const ExperimentConfig& cfg);

}  // namespace phe
