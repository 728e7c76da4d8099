#include "phe/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "phe/enumerate.hpp"
#include "phe/errors.hpp"
#include "phe/parallel.hpp"

namespace phe {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

Intensity intensity_from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "constant") return Intensity::constant(j.at("value").get<double>());
    if (type == "piecewise_constant")
        return Intensity::piecewise_constant(j.at("breaks").get<std::vector<double>>(),
                                             j.at("values").get<std::vector<double>>());
    if (type == "piecewise_polynomial")
        return Intensity::piecewise_polynomial(
            j.at("breaks").get<std::vector<double>>(),
            j.at("coeffs").get<std::vector<std::vector<double>>>());
    if (type == "sqrt_affine_power")
        return Intensity::sqrt_affine_power(j.at("a").get<double>(), j.at("b").get<double>(),
                                            j.at("alpha").get<double>());
    throw ConfigError("intensity: unknown type '" + type + "'");
}

Json intensity_to_json(const Intensity& s) {
    Json j;
    switch (s.kind()) {
        case Intensity::Kind::Constant:
            j["type"] = "constant";
            j["value"] = s.values()[0];
            break;
        case Intensity::Kind::PiecewiseConstant:
            j["type"] = "piecewise_constant";
            j["breaks"] = s.breaks();
            j["values"] = s.values();
            break;
        case Intensity::Kind::PiecewisePolynomial:
            j["type"] = "piecewise_polynomial";
            j["breaks"] = s.breaks();
            j["coeffs"] = s.coefficients();
            break;
        case Intensity::Kind::SqrtAffinePower:
            j["type"] = "sqrt_affine_power";
            j["a"] = s.param_a();
            j["b"] = s.param_b();
            j["alpha"] = s.param_alpha();
            break;
    }
    return j;
}

namespace {

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    try {
        cfg.framework = framework_from_string(j.at("framework").get<std::string>());
        if (j.contains("intensity")) cfg.intensity = intensity_from_json(j.at("intensity"));
        read_field(j, "n", cfg.n);
        read_field(j, "poisson_grid_level", cfg.poisson_grid_level);

        if (j.contains("vector")) {
            const auto& v = j.at("vector");
            cfg.vector_means = v.at("means").get<std::vector<double>>();
            const std::string law = v.value("law", std::string("poisson"));
            if (law == "poisson")
                cfg.vector_law = VectorObs::Law::Poisson;
            else if (law == "binomial")
                cfg.vector_law = VectorObs::Law::Binomial;
            else if (law == "gamma")
                cfg.vector_law = VectorObs::Law::Gamma;
            else
                throw ConfigError("vector.law must be poisson, binomial or gamma");
            if (v.contains("trials"))
                cfg.vector_trials = v.at("trials").get<std::vector<std::uint64_t>>();
            cfg.kappa = v.value("kappa", 1.0);
            cfg.tau = v.value("tau", 1.0);
        }

        if (j.contains("censor")) {
            const auto& c = j.at("censor");
            const std::string type = c.at("type").get<std::string>();
            if (type == "none")
                cfg.censor = CensorLaw::none();
            else if (type == "uniform")
                cfg.censor = CensorLaw::uniform(c.at("hi").get<double>());
            else
                throw ConfigError("censor.type must be none or uniform");
        }
        if (j.contains("counting")) {
            const auto& c = j.at("counting");
            cfg.k_jumps = c.value("k", 1u);
            cfg.kappa_prime = c.value("kappa_prime", 2.0);
            cfg.gamma_bound = c.value("gamma", 1.0);
        }

        if (j.contains("family")) {
            const auto& f = j.at("family");
            read_field(f, "kind", cfg.family.kind);
            read_field(f, "max_level", cfg.family.max_level);
            read_field(f, "min_level", cfg.family.min_level);
            read_field(f, "max_cells", cfg.family.max_cells);
            read_field(f, "max_splits", cfg.family.max_splits);
            read_field(f, "cap", cfg.family.cap);
            read_field(f, "pair_cap", cfg.family.pair_cap);
        }
        read_field(j, "weights", cfg.weights);
        read_field(j, "delta", cfg.delta);
        if (j.contains("penalty")) {
            const auto& p = j.at("penalty");
            if (p.contains("c1")) cfg.pen_c1 = p.at("c1").get<double>();
            if (p.contains("c2")) cfg.pen_c2 = p.at("c2").get<double>();
        }
        read_field(j, "unsafe_penalties", cfg.unsafe_penalties);
        if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
        read_field(j, "randomize_ties", cfg.randomize_ties);

        read_field(j, "replicates", cfg.replicates);
        read_field(j, "seed", cfg.seed);
        read_field(j, "workers", cfg.workers);
        read_field(j, "out_dir", cfg.out_dir);
        read_field(j, "emit_tests", cfg.emit_tests);

        if (j.contains("rate")) {
            const auto& r = j.at("rate");
            cfg.n_grid = r.at("n_grid").get<std::vector<std::uint64_t>>();
            cfg.bootstrap = r.value("bootstrap", std::uint64_t{1000});
            cfg.target_exponent = r.value("target_exponent", 0.0);
        }

        if (j.contains("tail")) {
            const auto& t = j.at("tail");
            cfg.tail_law = t.value("law", std::string("poisson"));
            if (t.contains("means")) cfg.tail_means = t.at("means").get<std::vector<double>>();
            if (t.contains("cell_probs"))
                cfg.tail_cell_probs = t.at("cell_probs").get<std::vector<double>>();
            cfg.tail_rows = t.value("rows", std::uint64_t{100});
            cfg.tail_x_grid = t.at("x_grid").get<std::vector<double>>();
        }

        if (j.contains("spike")) {
            const auto& sp = j.at("spike");
            cfg.spike.k = sp.value("k", 2u);
            cfg.spike.sqrt_base = sp.value("sqrt_base", 0.5);
            cfg.spike.amplitude = sp.value("amplitude", 2.0);
            cfg.spike.exponent = sp.value("exponent", 1.0);
            cfg.spike.holder_R = sp.value("holder_R", 4.0);
            cfg.spike.max_grid_level = sp.value("max_grid_level", 4u);
            for (const auto& cj : sp.at("cubes")) {
                const unsigned level = cj.at(0).get<unsigned>();
                std::vector<std::uint32_t> idx;
                for (std::size_t d = 1; d < cj.size(); ++d)
                    idx.push_back(cj.at(d).get<std::uint32_t>());
                cfg.spike.cubes.emplace_back(level, std::move(idx));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: parse error in ") + path + ": " + e.what());
    }
    return from_json(j);
}

Json ExperimentConfig::echo() const {
    Json j;
    j["framework"] = to_string(framework);
    if (intensity) j["intensity"] = intensity_to_json(*intensity);
    j["n"] = n;
    j["family"] = Json{{"kind", family.kind},       {"max_level", family.max_level},
                       {"min_level", family.min_level}, {"max_cells", family.max_cells},
                       {"max_splits", family.max_splits}, {"cap", family.cap}};
    j["weights"] = weights;
    j["delta"] = delta;
    if (pen_c1) j["penalty_c1"] = *pen_c1;
    if (pen_c2) j["penalty_c2"] = *pen_c2;
    j["unsafe_penalties"] = unsafe_penalties;
    j["epsilon"] = penalty_spec().epsilon;
    j["replicates"] = replicates;
    j["seed"] = seed;
    if (framework == Framework::Counting)
        j["counting"] = Json{{"k", k_jumps}, {"kappa_prime", kappa_prime}, {"gamma", gamma_bound}};
    return j;
}

PenaltySpec ExperimentConfig::penalty_spec() const {
    PenaltySpec spec;
    switch (framework) {
        case Framework::Density:
            spec = PenaltySpec::density(n, delta);
            break;
        case Framework::Poisson:
            spec = PenaltySpec::poisson(delta);
            break;
        case Framework::Vector:
            spec = PenaltySpec::vector_counts(kappa, tau, delta);
            break;
        case Framework::Counting:
            spec = PenaltySpec::counting(k_jumps, kappa_prime, gamma_bound, delta);
            break;
    }
    spec.c1_override = pen_c1;
    spec.c2_override = pen_c2;
    spec.unsafe = unsafe_penalties;
    if (epsilon) spec.epsilon = *epsilon;
    spec.validate();
    return spec;
}

WeightScheme ExperimentConfig::weight_scheme() const {
    if (weights == "interval_grid") return WeightScheme::interval_grid();
    if (weights == "binary_tree") return WeightScheme::binary_tree();
    if (weights == "vector_intervals")
        return WeightScheme::vector_intervals(static_cast<std::uint32_t>(vector_means.size()));
    if (weights == "vector_spikes")
        return WeightScheme::vector_spikes(static_cast<std::uint32_t>(vector_means.size()));
    throw ConfigError("weights: unknown scheme '" + weights + "'");
}

std::vector<IntervalPartition> ExperimentConfig::interval_family() const {
    if (family.kind == "interval")
        return enumerate_interval_family(family.max_level, family.max_cells, family.cap);
    if (family.kind == "regular")
        return enumerate_regular_family(family.min_level, family.max_level);
    if (family.kind == "tree") {
        std::vector<IntervalPartition> out;
        for (const auto& t : enumerate_tree_family(1, family.max_splits, family.cap))
            out.push_back(t.as_interval());
        return out;
    }
    throw ConfigError("family.kind: expected interval, regular or tree");
}

std::vector<VectorPartition> ExperimentConfig::vector_family() const {
    const auto n32 = static_cast<std::uint32_t>(vector_means.size());
    if (family.kind == "vector_intervals")
        return enumerate_vector_interval_family(n32, family.max_cells, family.cap);
    if (family.kind == "vector_spikes")
        return enumerate_vector_spike_family(n32, static_cast<std::uint32_t>(family.max_cells),
                                             family.cap);
    throw ConfigError("family.kind: expected vector_intervals or vector_spikes");
}

// ---------------------------------------------------------------------------
// Replicate runner
// ---------------------------------------------------------------------------

namespace {

template <typename P, typename SimFn, typename RiskFn>
ExperimentRun run_generic(const ExperimentConfig& cfg, const std::vector<P>& family,
                          const WeightScheme& ws, SimFn&& simulate, RiskFn&& risk_of) {
    const PenaltySpec spec = cfg.penalty_spec();
    SelectOptions opts;
    opts.workers = 1;
    opts.randomize_ties = cfg.randomize_ties;
    opts.keep_tests = cfg.emit_tests;
    opts.pair_cap = cfg.family.pair_cap;

    ExperimentRun run;
    run.rows.resize(cfg.replicates);
    std::vector<double> risks(cfg.replicates, 0.0);
    SelectionSummary first;
    Json first_est;
    std::string first_csv;

    parallel_for(cfg.replicates, cfg.workers, [&](std::size_t r) {
        const std::uint64_t rep_seed = derive_seed(cfg.seed, r);
        const auto obs = simulate(rep_seed);
        SelectOptions o = opts;
        o.tie_seed = derive_seed(cfg.seed, r, 99);
        auto res = select(family, obs, spec, ws, o);
        const double risk = risk_of(res, obs);
        risks[r] = risk;
        run.rows[r] = ReplicateRow{r, rep_seed, res.summary.selected,
                                   family[res.summary.selected].size(), risk};
        if (r == 0) {
            first = std::move(res.summary);
            first_est = to_json(res.estimate);
            if constexpr (std::is_same_v<P, IntervalPartition>)
                first_csv = step_csv(res.estimate);
        }
    });

    run.risk = RiskEstimate::from_samples(risks);
    run.first_summary = std::move(first);
    run.first_estimate = std::move(first_est);
    run.first_step_csv = std::move(first_csv);
    return run;
}

}  // namespace

ExperimentRun run_replicates(const ExperimentConfig& cfg) {
    const WeightScheme ws = cfg.weight_scheme();
    switch (cfg.framework) {
        case Framework::Density: {
            if (!cfg.intensity) throw ConfigError("density framework needs an intensity");
            const Intensity s = *cfg.intensity;
            if (std::abs(s.mass() - 1.0) > 1e-9)
                throw ConfigError("density framework: intensity must integrate to 1");
            const auto family = cfg.interval_family();
            std::vector<CellIntegrals> cis;
            cis.reserve(family.size());
            for (const auto& m : family) cis.push_back(cell_integrals(m, s));
            return run_generic(
                cfg, family, ws,
                [&](std::uint64_t seed) { return DensityObs::simulate(s, cfg.n, seed); },
                [&](const SelectionResult<IntervalPartition>& res, const DensityObs&) {
                    return hellinger_sq_to_intensity(res.estimate, cis[res.summary.selected]);
                });
        }
        case Framework::Poisson: {
            if (!cfg.intensity) throw ConfigError("poisson framework needs an intensity");
            const Intensity s = *cfg.intensity;
            const auto family = cfg.interval_family();
            for (const auto& m : family)
                if (m.grid_level() > cfg.poisson_grid_level)
                    throw ConfigError("poisson_grid_level must be at least the family's depth");
            std::vector<CellIntegrals> cis;
            cis.reserve(family.size());
            for (const auto& m : family) cis.push_back(cell_integrals(m, s));
            return run_generic(
                cfg, family, ws,
                [&](std::uint64_t seed) {
                    return PoissonObs::simulate(s, cfg.poisson_grid_level, seed);
                },
                [&](const SelectionResult<IntervalPartition>& res, const PoissonObs&) {
                    return hellinger_sq_to_intensity(res.estimate, cis[res.summary.selected]);
                });
        }
        case Framework::Vector: {
            if (cfg.vector_means.empty()) throw ConfigError("vector framework needs vector.means");
            const auto family = cfg.vector_family();
            std::vector<CellIntegrals> cis;
            cis.reserve(family.size());
            for (const auto& m : family) cis.push_back(cell_integrals(m, cfg.vector_means));
            return run_generic(
                cfg, family, ws,
                [&](std::uint64_t seed) {
                    return VectorObs::simulate(cfg.vector_means, cfg.vector_law, seed,
                                               cfg.vector_trials);
                },
                [&](const SelectionResult<VectorPartition>& res, const VectorObs&) {
                    return hellinger_sq_to_intensity(res.estimate, cis[res.summary.selected]);
                });
        }
        case Framework::Counting: {
            if (!cfg.intensity) throw ConfigError("survival framework needs a hazard intensity");
            const Intensity s = *cfg.intensity;
            const bool pw = s.kind() == Intensity::Kind::Constant ||
                            s.kind() == Intensity::Kind::PiecewiseConstant;
            const auto family = cfg.interval_family();
            return run_generic(
                cfg, family, ws,
                [&](std::uint64_t seed) {
                    return SurvivalObs::simulate(s, cfg.censor, cfg.n, seed);
                },
                [&](const SelectionResult<IntervalPartition>& res, const SurvivalObs& obs) {
                    return pw ? hellinger_sq_to_hazard(res.estimate, s, obs)
                              : std::numeric_limits<double>::quiet_NaN();
                });
        }
    }
    throw ConfigError("unknown framework");
}

// ---------------------------------------------------------------------------
// File emission
// ---------------------------------------------------------------------------

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
}

std::string replicates_csv(const ExperimentRun& run) {
    std::ostringstream os;
    os << "replicate,seed,selected,cells,risk\n";
    for (const auto& row : run.rows) {
        os << row.replicate << ',' << row.seed << ',' << row.selected << ',' << row.cells << ','
           << format_double(row.risk) << '\n';
    }
    return os.str();
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg) {
    const auto run = run_replicates(cfg);
    fs::create_directories(cfg.out_dir);

    Json risk;
    risk["schema_version"] = 1;
    risk["config"] = cfg.echo();
    risk["risk"] = to_json(run.risk);
    write_text(fs::path(cfg.out_dir) / "risk.json", risk.dump(2) + "\n");
    write_text(fs::path(cfg.out_dir) / "replicates.csv", replicates_csv(run));
    write_text(fs::path(cfg.out_dir) / "report.json", to_json(run.first_summary).dump(2) + "\n");
    write_text(fs::path(cfg.out_dir) / "estimate.json", run.first_estimate.dump(2) + "\n");
    if (!run.first_step_csv.empty())
        write_text(fs::path(cfg.out_dir) / "estimate_step.csv", run.first_step_csv);
}

// ---------------------------------------------------------------------------
// Rate study
// ---------------------------------------------------------------------------

namespace {

double ols_slope(const std::vector<double>& x, const std::vector<double>& y, double* intercept) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw ConfigError("rate study: degenerate n grid");
    if (intercept) *intercept = my - mx * (sxy / sxx);
    return sxy / sxx;
}

}  // namespace

RateStudyResult run_rate_study(const ExperimentConfig& cfg, bool write_files) {
    if (cfg.framework != Framework::Density)
        throw ConfigError("rate study: only the density framework is wired up");
    if (cfg.n_grid.size() < 4) throw ConfigError("rate study: need at least 4 grid points");

    RateStudyResult out;
    out.n_grid = cfg.n_grid;
    out.target = cfg.target_exponent;

    std::vector<std::vector<double>> all_risks;
    for (std::size_t g = 0; g < cfg.n_grid.size(); ++g) {
        ExperimentConfig point = cfg;
        point.n = cfg.n_grid[g];
        point.seed = derive_seed(cfg.seed, g, 7);
        const auto run = run_replicates(point);
        all_risks.push_back(run.risk.per_replicate);
        out.mean_risks.push_back(run.risk.mean);
        out.stderrs.push_back(run.risk.stderr);
        if (run.risk.mean <= 0.0)
            throw ConfigError("rate study: zero mean risk at n=" + std::to_string(point.n) +
                              "; the slope is undefined");
    }

    std::vector<double> lx, ly;
    for (std::size_t g = 0; g < cfg.n_grid.size(); ++g) {
        lx.push_back(std::log(static_cast<double>(cfg.n_grid[g])));
        ly.push_back(std::log(out.mean_risks[g]));
    }
    out.slope = ols_slope(lx, ly, &out.intercept);

    // bootstrap over replicates within each grid point
    std::vector<double> slopes;
    slopes.reserve(cfg.bootstrap);
    Rng rng(derive_seed(cfg.seed, 0, 13));
    for (std::uint64_t b = 0; b < cfg.bootstrap; ++b) {
        std::vector<double> by;
        by.reserve(cfg.n_grid.size());
        bool ok = true;
        for (const auto& risks : all_risks) {
            KahanSum acc;
            for (std::size_t i = 0; i < risks.size(); ++i)
                acc.add(risks[rng.below(risks.size())]);
            const double mean = acc.value() / static_cast<double>(risks.size());
            if (mean <= 0.0) {
                ok = false;
                break;
            }
            by.push_back(std::log(mean));
        }
        if (ok) slopes.push_back(ols_slope(lx, by, nullptr));
    }
    std::sort(slopes.begin(), slopes.end());
    if (!slopes.empty()) {
        out.ci_lo = slopes[static_cast<std::size_t>(0.025 * static_cast<double>(slopes.size()))];
        out.ci_hi = slopes[std::min(slopes.size() - 1,
                                    static_cast<std::size_t>(0.975 * static_cast<double>(slopes.size())))];
    }

    if (write_files) {
        fs::create_directories(cfg.out_dir);
        write_text(fs::path(cfg.out_dir) / "rate.json", to_json(out).dump(2) + "\n");
        std::ostringstream csv;
        csv << "n,mean_risk,stderr\n";
        for (std::size_t g = 0; g < out.n_grid.size(); ++g)
            csv << out.n_grid[g] << ',' << format_double(out.mean_risks[g]) << ','
                << format_double(out.stderrs[g]) << '\n';
        write_text(fs::path(cfg.out_dir) / "rate.csv", csv.str());
    }
    return out;
}

Json to_json(const RateStudyResult& r) {
    Json j;
    j["n_grid"] = r.n_grid;
    j["mean_risks"] = r.mean_risks;
    j["stderrs"] = r.stderrs;
    j["slope"] = r.slope;
    j["intercept"] = r.intercept;
    j["bootstrap_ci"] = Json::array({r.ci_lo, r.ci_hi});
    j["target_exponent"] = r.target;
    return j;
}

// ---------------------------------------------------------------------------
// Spike study
// ---------------------------------------------------------------------------

SpikeStudyResult run_spike_study(const ExperimentConfig& cfg, bool write_files) {
    const auto& sp = cfg.spike;
    if (sp.k < 2) throw ConfigError("spike study: needs dimension k >= 2");
    if (sp.cubes.empty()) throw ConfigError("spike study: needs at least one patch cube");
    unsigned jbar = sp.cubes.front().level;
    for (const auto& c : sp.cubes) jbar = std::min(jbar, c.level);
    if (jbar == 0) throw ConfigError("spike study: patch cubes must be strictly inside the cube");
    if (sp.max_grid_level < jbar)
        throw ConfigError("spike study: max_grid_level smaller than the patch level");

    std::vector<CubeIntensity::Spike> spikes;
    for (const auto& c : sp.cubes)
        spikes.push_back(CubeIntensity::Spike{c, sp.amplitude, sp.exponent});
    const CubeIntensity s(sp.k, sp.sqrt_base, spikes);
    const WeightScheme ws = WeightScheme::cube(sp.k);

    auto score = [&](const CubePartition& m) {
        return bias_sq(m, s) + static_cast<double>(m.size()) + ws.weight(m);
    };

    SpikeStudyResult out;
    out.best_regular = out.best_spike = out.best_tree =
        std::numeric_limits<double>::infinity();

    for (unsigned j = 0; j <= sp.max_grid_level; ++j) {
        const double b = score(CubePartition::regular(sp.k, j));
        if (b < out.best_regular) {
            out.best_regular = b;
            out.argmin_regular = j;
        }
    }

    // patch cubes refined to level j, joined with the trivial grid
    for (unsigned j = jbar; j <= sp.max_grid_level; ++j) {
        std::vector<DyadicCube> p;
        for (const auto& c : sp.cubes) {
            std::vector<DyadicCube> frontier{c};
            while (frontier.front().level < j) {
                std::vector<DyadicCube> next;
                for (const auto& f : frontier)
                    for (std::uint32_t ch = 0; ch < (1u << sp.k); ++ch)
                        next.push_back(f.child(ch));
                frontier = std::move(next);
            }
            p.insert(p.end(), frontier.begin(), frontier.end());
        }
        const double b = score(CubePartition::spike(sp.k, 0, p));
        if (b < out.best_spike) {
            out.best_spike = b;
            out.argmin_spike = j;
        }
    }

    for (unsigned j = jbar; j <= sp.max_grid_level; ++j) {
        auto tree = TreePartition::grow(sp.k, [&](const DyadicCube& c) {
            for (const auto& v : sp.cubes) {
                if (c.level < v.level && cube_contains(c, v)) return true;
                if (cube_contains(v, c) && c.level < j) return true;
            }
            return false;
        });
        const double b = score(tree.as_cube());
        if (b < out.best_tree) {
            out.best_tree = b;
            out.argmin_tree = j;
        }
    }

    // closed-form comparison terms for the three strategies
    {
        const double k = static_cast<double>(sp.k);
        const double R = sp.holder_R;
        const double alpha = sp.exponent;
        double volume = 0.0;
        for (const auto& c : sp.cubes) volume += c.volume();
        const double kR = std::max(k * R, 1.0000001);
        const double e1 = 2.0 * k / (k + 2.0 * alpha);
        out.bound_regular =
            std::pow(2.0, k * jbar) + std::pow(volume, k / (k + 2.0 * alpha)) * std::pow(kR, e1);
        out.bound_spike =
            volume * (k * jbar * std::pow(2.0, k * jbar) +
                      std::pow(kR, e1) * std::pow(std::log(kR), 2.0 * alpha / (2.0 * alpha + k)));
        out.bound_tree = volume * (std::pow(2.0, k) * jbar * std::pow(2.0, k * jbar) +
                                   std::pow(kR, e1));
    }

    out.winner = "regular";
    double best = out.best_regular;
    if (out.best_spike < best) {
        out.winner = "spike";
        best = out.best_spike;
    }
    if (out.best_tree < best) out.winner = "tree";

    if (write_files) {
        fs::create_directories(cfg.out_dir);
        write_text(fs::path(cfg.out_dir) / "spike.json", to_json(out).dump(2) + "\n");
    }
    return out;
}

Json to_json(const SpikeStudyResult& r) {
    Json j;
    j["best"] = Json{{"regular", r.best_regular}, {"spike", r.best_spike}, {"tree", r.best_tree}};
    j["argmin_level"] =
        Json{{"regular", r.argmin_regular}, {"spike", r.argmin_spike}, {"tree", r.argmin_tree}};
    j["bounds"] = Json{{"regular", r.bound_regular}, {"spike", r.bound_spike}, {"tree", r.bound_tree}};
    j["winner"] = r.winner;
    return j;
}

// ---------------------------------------------------------------------------
// Tail and oracle checks
// ---------------------------------------------------------------------------

TailCheck run_tail_check(const ExperimentConfig& cfg, bool write_files) {
    TailCheck check;
    if (cfg.tail_law == "rows") {
        check = chi2_tail_check_rows(cfg.tail_cell_probs, cfg.tail_rows, cfg.tail_x_grid,
                                     cfg.replicates, cfg.seed);
    } else {
        const TailLaw law = cfg.tail_law == "gamma" ? TailLaw::Gamma : TailLaw::Poisson;
        check = chi2_tail_check_independent(law, cfg.tail_means, cfg.tail_x_grid, cfg.replicates,
                                            cfg.seed);
    }
    if (write_files) {
        fs::create_directories(cfg.out_dir);
        write_text(fs::path(cfg.out_dir) / "tail_check.json", to_json(check).dump(2) + "\n");
        write_text(fs::path(cfg.out_dir) / "tail_check.csv", tail_check_csv(check));
    }
    return check;
}

OracleVerdict run_oracle_check(const ExperimentConfig& cfg, bool write_files) {
    const WeightScheme ws = cfg.weight_scheme();
    const PenaltySpec spec = cfg.penalty_spec();
    OracleVerdict verdict;
    switch (cfg.framework) {
        case Framework::Density: {
            if (!cfg.intensity) throw ConfigError("oracle check: needs an intensity");
            const Intensity s = *cfg.intensity;
            if (std::abs(s.mass() - 1.0) > 1e-9)
                throw ConfigError("oracle check: density must integrate to 1");
            verdict = oracle_inequality_check(
                cfg.interval_family(), s, ws, spec,
                [&](std::uint64_t seed) { return DensityObs::simulate(s, cfg.n, seed); },
                cfg.replicates, cfg.seed, cfg.workers);
            break;
        }
        case Framework::Poisson: {
            if (!cfg.intensity) throw ConfigError("oracle check: needs an intensity");
            const Intensity s = *cfg.intensity;
            verdict = oracle_inequality_check(
                cfg.interval_family(), s, ws, spec,
                [&](std::uint64_t seed) {
                    return PoissonObs::simulate(s, cfg.poisson_grid_level, seed);
                },
                cfg.replicates, cfg.seed, cfg.workers);
            break;
        }
        case Framework::Vector: {
            verdict = oracle_inequality_check(
                cfg.vector_family(), cfg.vector_means, ws, spec,
                [&](std::uint64_t seed) {
                    return VectorObs::simulate(cfg.vector_means, cfg.vector_law, seed,
                                               cfg.vector_trials);
                },
                cfg.replicates, cfg.seed, cfg.workers);
            break;
        }
        case Framework::Counting:
            throw ConfigError("oracle check: survival risks use the at-risk measure; "
                              "use the experiment runner instead");
    }
    if (write_files) {
        fs::create_directories(cfg.out_dir);
        write_text(fs::path(cfg.out_dir) / "oracle_check.json", to_json(verdict).dump(2) + "\n");
    }
    return verdict;
}

Json enumerate_dump(const ExperimentConfig& cfg) {
    const WeightScheme ws = cfg.weight_scheme();
    Json j;
    Json members = Json::array();
    double sigma = 0.0;
    if (cfg.framework == Framework::Vector) {
        const auto family = cfg.vector_family();
        for (const auto& m : family) {
            Json e;
            e["partition"] = to_json(m);
            e["cells"] = m.size();
            e["weight"] = ws.weight(m);
            members.push_back(std::move(e));
        }
        sigma = truncated_sigma(ws, family);
    } else {
        const auto family = cfg.interval_family();
        for (const auto& m : family) {
            Json e;
            e["partition"] = to_json(m);
            e["cells"] = m.size();
            e["weight"] = ws.weight(m);
            members.push_back(std::move(e));
        }
        sigma = truncated_sigma(ws, family);
    }
    j["count"] = members.size();
    j["sigma_trunc"] = sigma;
    j["members"] = std::move(members);
    return j;
}

}  // namespace phe
