#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "phe/intensity.hpp"
#include "phe/partition.hpp"
#include "phe/rng.hpp"

namespace phe {

/// Lebesgue / counting reference measures, usable wherever an M-provider is
/// expected and M is deterministic.
struct LebesgueMeasure {
    double measure(const IntervalCell& c) const { return c.length(); }
    double measure(const CubeCell& c) const { return c.volume(); }
};

struct CountingMeasure {
    double measure(const std::vector<std::uint32_t>& block) const {
        return static_cast<double>(block.size());
    }
};

/// Empirical measure of an i.i.d. sample, divided by the sample size;
/// reference measure is Lebesgue. N([0,1)) == 1 by construction.
class DensityObs {
public:
    static DensityObs simulate(const Intensity& density, std::uint64_t n, std::uint64_t seed);
    static DensityObs from_points(std::vector<double> points);

    double count(const IntervalCell& c) const;
    double measure(const IntervalCell& c) const { return c.length(); }
    double total_count() const { return 1.0; }
    std::uint64_t sample_size() const { return static_cast<std::uint64_t>(points_.size()); }
    const std::vector<double>& points() const { return points_; }

    void dump_jsonl(std::ostream& os) const;
    static DensityObs load_jsonl(std::istream& is);

private:
    std::vector<double> points_;  // draw order
    std::vector<double> sorted_;
};

/// Poisson counts on a dyadic grid of [0,1); cell counts for any coarser
/// dyadic cell are exact integer sums. Reference measure is Lebesgue.
class PoissonObs {
public:
    static PoissonObs simulate(const Intensity& intensity, unsigned grid_level,
                               std::uint64_t seed);
    static PoissonObs from_counts(unsigned grid_level, std::vector<std::uint64_t> counts);

    double count(const IntervalCell& c) const;
    double measure(const IntervalCell& c) const { return c.length(); }
    double total_count() const { return static_cast<double>(prefix_.back()); }
    unsigned grid_level() const { return grid_level_; }
    const std::vector<std::uint64_t>& grid_counts() const { return counts_; }

    void dump_jsonl(std::ostream& os) const;
    static PoissonObs load_jsonl(std::istream& is);

private:
    unsigned grid_level_ = 0;
    std::vector<std::uint64_t> counts_;
    std::vector<std::uint64_t> prefix_;
};

/// Independent nonnegative coordinates with means s_i; reference measure is
/// the counting measure on {1..n}.
class VectorObs {
public:
    enum class Law { Poisson, Binomial, Gamma };

    /// For the binomial law, trials[i] >= 1 and p_i = s_i / trials[i] <= 1.
    static VectorObs simulate(const std::vector<double>& means, Law law, std::uint64_t seed,
                              const std::vector<std::uint64_t>& trials = {});
    static VectorObs from_values(std::vector<double> values);

    double count(const std::vector<std::uint32_t>& block) const;
    double measure(const std::vector<std::uint32_t>& block) const {
        return static_cast<double>(block.size());
    }
    double total_count() const;
    const std::vector<double>& values() const { return values_; }

    void dump_jsonl(std::ostream& os) const;
    static VectorObs load_jsonl(std::istream& is);

private:
    std::vector<double> values_;
};

struct CensorLaw {
    enum class Type { None, Uniform };
    Type type = Type::None;
    double hi = 1.0;  // uniform on [0, hi]

    static CensorLaw none() { return {Type::None, 0.0}; }
    static CensorLaw uniform(double hi) { return {Type::Uniform, hi}; }
    double sample(Rng& rng) const {
        return type == Type::None ? std::numeric_limits<double>::infinity() : rng.uniform(0.0, hi);
    }
};

/// Right-censored survival sample on [0,1): N counts uncensored events, the
/// reference measure is the integrated at-risk process M(I) = ∫_I Y dλ with
/// Y(t) = #{j : t_tilde_j >= t}.
class SurvivalObs {
public:
    struct Record {
        double t_tilde;
        bool uncensored;
    };

    /// Lifetimes are drawn with the given hazard on [0,1), extended beyond 1
    /// at its terminal value (a terminal value of zero means survivors never
    /// fail).
    static SurvivalObs simulate(const Intensity& hazard, const CensorLaw& censoring,
                                std::uint64_t n, std::uint64_t seed);
    static SurvivalObs from_records(std::vector<Record> records);

    double count(const IntervalCell& c) const;
    double measure(const IntervalCell& c) const {
        return measure_between(c.lo.value(), c.hi.value());
    }
    double measure_between(double a, double b) const;
    double total_count() const { return static_cast<double>(events_.size()); }
    std::uint64_t sample_size() const { return static_cast<std::uint64_t>(records_.size()); }
    const std::vector<Record>& records() const { return records_; }

    void dump_jsonl(std::ostream& os) const;
    static SurvivalObs load_jsonl(std::istream& is);

private:
    void build_index();

    std::vector<Record> records_;
    std::vector<double> events_;        // sorted uncensored times in [0,1)
    std::vector<double> sorted_times_;  // all t_tilde, sorted
    std::vector<double> time_prefix_;   // prefix sums of sorted_times_ (capped at 1)
};

}  // namespace phe
