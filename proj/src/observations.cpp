#include "phe/observations.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "phe/errors.hpp"
#include "phe/summation.hpp"

namespace phe {

// ---------------------------------------------------------------------------
// DensityObs
// ---------------------------------------------------------------------------

DensityObs DensityObs::simulate(const Intensity& density, std::uint64_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("simulate: need n >= 1");
    if (std::abs(density.mass() - 1.0) > 1e-9)
        throw std::invalid_argument("simulate: intensity does not integrate to 1");
    Rng rng(seed);
    std::vector<double> pts;
    pts.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) pts.push_back(density.inverse_cdf(rng.uniform()));
    return from_points(std::move(pts));
}

DensityObs DensityObs::from_points(std::vector<double> points) {
    if (points.empty()) throw std::invalid_argument("from_points: empty sample");
    for (double x : points)
        if (!(x >= 0.0) || x >= 1.0)
            throw std::invalid_argument("from_points: points must lie in [0,1)");
    DensityObs obs;
    obs.points_ = std::move(points);
    obs.sorted_ = obs.points_;
    std::sort(obs.sorted_.begin(), obs.sorted_.end());
    return obs;
}

double DensityObs::count(const IntervalCell& c) const {
    const auto lo = std::lower_bound(sorted_.begin(), sorted_.end(), c.lo.value());
    const auto hi = std::lower_bound(sorted_.begin(), sorted_.end(), c.hi.value());
    return static_cast<double>(hi - lo) / static_cast<double>(sorted_.size());
}

void DensityObs::dump_jsonl(std::ostream& os) const {
    for (double x : points_) {
        nlohmann::json j{{"x", x}};
        os << j.dump() << '\n';
    }
}

DensityObs DensityObs::load_jsonl(std::istream& is) {
    std::vector<double> pts;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        pts.push_back(nlohmann::json::parse(line).at("x").get<double>());
    }
    return from_points(std::move(pts));
}

// ---------------------------------------------------------------------------
// PoissonObs
// ---------------------------------------------------------------------------

PoissonObs PoissonObs::simulate(const Intensity& intensity, unsigned grid_level,
                                std::uint64_t seed) {
    if (grid_level > 24) throw TooLargeError("poisson grid too fine");
    Rng rng(seed);
    const std::uint64_t cells = std::uint64_t{1} << grid_level;
    const double step = 1.0 / static_cast<double>(cells);
    std::vector<std::uint64_t> counts(cells);
    for (std::uint64_t i = 0; i < cells; ++i) {
        const double mean = intensity.integral(i * step, (i + 1) * step);
        counts[i] = rng.poisson(mean);
    }
    return from_counts(grid_level, std::move(counts));
}

PoissonObs PoissonObs::from_counts(unsigned grid_level, std::vector<std::uint64_t> counts) {
    if (counts.size() != (std::uint64_t{1} << grid_level))
        throw std::invalid_argument("from_counts: count vector does not match the grid");
    PoissonObs obs;
    obs.grid_level_ = grid_level;
    obs.counts_ = std::move(counts);
    obs.prefix_.assign(obs.counts_.size() + 1, 0);
    for (std::size_t i = 0; i < obs.counts_.size(); ++i)
        obs.prefix_[i + 1] = obs.prefix_[i] + obs.counts_[i];
    return obs;
}

double PoissonObs::count(const IntervalCell& c) const {
    if (c.lo.level > grid_level_ || c.hi.level > grid_level_)
        throw std::invalid_argument("count: cell finer than the simulation grid");
    const std::uint64_t lo = c.lo.num_at_level(grid_level_);
    const std::uint64_t hi = c.hi.num_at_level(grid_level_);
    return static_cast<double>(prefix_[hi] - prefix_[lo]);
}

void PoissonObs::dump_jsonl(std::ostream& os) const {
    nlohmann::json head{{"grid_level", grid_level_}};
    os << head.dump() << '\n';
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        nlohmann::json j{{"cell", i}, {"count", counts_[i]}};
        os << j.dump() << '\n';
    }
}

PoissonObs PoissonObs::load_jsonl(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("load_jsonl: empty stream");
    const unsigned level = nlohmann::json::parse(line).at("grid_level").get<unsigned>();
    std::vector<std::uint64_t> counts(std::uint64_t{1} << level, 0);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        counts.at(j.at("cell").get<std::size_t>()) = j.at("count").get<std::uint64_t>();
    }
    return from_counts(level, std::move(counts));
}

// ---------------------------------------------------------------------------
// VectorObs
// ---------------------------------------------------------------------------

VectorObs VectorObs::simulate(const std::vector<double>& means, Law law, std::uint64_t seed,
                              const std::vector<std::uint64_t>& trials) {
    for (double m : means)
        if (m < 0.0) throw std::invalid_argument("simulate: negative mean");
    if (law == Law::Binomial && trials.size() != means.size())
        throw std::invalid_argument("simulate: binomial law needs one trial count per mean");
    Rng rng(seed);
    std::vector<double> vals;
    vals.reserve(means.size());
    for (std::size_t i = 0; i < means.size(); ++i) {
        switch (law) {
            case Law::Poisson:
                vals.push_back(static_cast<double>(rng.poisson(means[i])));
                break;
            case Law::Binomial: {
                if (trials[i] == 0 || means[i] > static_cast<double>(trials[i]))
                    throw std::invalid_argument("simulate: binomial needs mean <= trials");
                vals.push_back(
                    static_cast<double>(rng.binomial(trials[i], means[i] / trials[i])));
                break;
            }
            case Law::Gamma:
                vals.push_back(means[i] == 0.0 ? 0.0 : rng.gamma(means[i]));
                break;
        }
    }
    return from_values(std::move(vals));
}

VectorObs VectorObs::from_values(std::vector<double> values) {
    for (double v : values)
        if (v < 0.0) throw std::invalid_argument("from_values: negative component");
    VectorObs obs;
    obs.values_ = std::move(values);
    return obs;
}

double VectorObs::count(const std::vector<std::uint32_t>& block) const {
    KahanSum s;
    for (auto i : block) s.add(values_.at(i));
    return s.value();
}

double VectorObs::total_count() const {
    KahanSum s;
    for (double v : values_) s.add(v);
    return s.value();
}

void VectorObs::dump_jsonl(std::ostream& os) const {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        nlohmann::json j{{"i", i}, {"n", values_[i]}};
        os << j.dump() << '\n';
    }
}

VectorObs VectorObs::load_jsonl(std::istream& is) {
    std::vector<std::pair<std::size_t, double>> entries;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        entries.emplace_back(j.at("i").get<std::size_t>(), j.at("n").get<double>());
    }
    std::vector<double> vals(entries.size(), 0.0);
    for (const auto& [i, v] : entries) vals.at(i) = v;
    return from_values(std::move(vals));
}

// ---------------------------------------------------------------------------
// SurvivalObs
// ---------------------------------------------------------------------------

SurvivalObs SurvivalObs::simulate(const Intensity& hazard, const CensorLaw& censoring,
                                  std::uint64_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("simulate: need n >= 1");
    const double cum1 = hazard.cdf(1.0);
    if (!std::isfinite(cum1)) throw std::invalid_argument("simulate: divergent hazard");
    const double tail_rate = hazard.terminal_value();
    Rng rng(seed);
    std::vector<Record> records;
    records.reserve(n);
    for (std::uint64_t j = 0; j < n; ++j) {
        const double e = rng.exponential();
        double t;
        if (e < cum1)
            t = hazard.inverse_cdf(e);
        else if (tail_rate > 0.0)
            t = 1.0 + (e - cum1) / tail_rate;
        else
            t = std::numeric_limits<double>::infinity();
        const double c = censoring.sample(rng);
        records.push_back(Record{std::min(t, c), t <= c});
    }
    return from_records(std::move(records));
}

SurvivalObs SurvivalObs::from_records(std::vector<Record> records) {
    if (records.empty()) throw std::invalid_argument("from_records: empty sample");
    for (const auto& r : records)
        if (!(r.t_tilde >= 0.0)) throw std::invalid_argument("from_records: negative time");
    SurvivalObs obs;
    obs.records_ = std::move(records);
    obs.build_index();
    return obs;
}

void SurvivalObs::build_index() {
    events_.clear();
    sorted_times_.clear();
    for (const auto& r : records_) {
        if (r.uncensored && r.t_tilde < 1.0) events_.push_back(r.t_tilde);
        sorted_times_.push_back(std::min(r.t_tilde, 1.0));
    }
    std::sort(events_.begin(), events_.end());
    std::sort(sorted_times_.begin(), sorted_times_.end());
    time_prefix_.assign(sorted_times_.size() + 1, 0.0);
    KahanSum acc;
    for (std::size_t i = 0; i < sorted_times_.size(); ++i) {
        acc.add(sorted_times_[i]);
        time_prefix_[i + 1] = acc.value();
    }
}

double SurvivalObs::count(const IntervalCell& c) const {
    const auto lo = std::lower_bound(events_.begin(), events_.end(), c.lo.value());
    const auto hi = std::lower_bound(events_.begin(), events_.end(), c.hi.value());
    return static_cast<double>(hi - lo);
}

double SurvivalObs::measure_between(double a, double b) const {
    if (b <= a) return 0.0;
    // sum over subjects of lambda([a,b) intersect [0, t_tilde])
    const auto ia = std::upper_bound(sorted_times_.begin(), sorted_times_.end(), a) -
                    sorted_times_.begin();
    const auto ib = std::lower_bound(sorted_times_.begin(), sorted_times_.end(), b) -
                    sorted_times_.begin();
    const double middle = (time_prefix_[ib] - time_prefix_[ia]) -
                          a * static_cast<double>(ib - ia);
    const double tail = (b - a) * static_cast<double>(sorted_times_.size() - ib);
    return middle + tail;
}

void SurvivalObs::dump_jsonl(std::ostream& os) const {
    for (const auto& r : records_) {
        nlohmann::json j;
        if (std::isinf(r.t_tilde))
            j["t_tilde"] = nullptr;
        else
            j["t_tilde"] = r.t_tilde;
        j["d"] = r.uncensored ? 1 : 0;
        os << j.dump() << '\n';
    }
}

SurvivalObs SurvivalObs::load_jsonl(std::istream& is) {
    std::vector<Record> records;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        const double t = j.at("t_tilde").is_null()
                             ? std::numeric_limits<double>::infinity()
                             : j.at("t_tilde").get<double>();
        records.push_back(Record{t, j.at("d").get<int>() != 0});
    }
    return from_records(std::move(records));
}

}  // namespace phe
