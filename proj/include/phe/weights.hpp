#pragma once

#include <cstdint>
#include <vector>

#include "phe/partition.hpp"
#include "phe/summation.hpp"

namespace phe {

enum class WeightFamily {
    IntervalGrid,     // interval partitions coded by (grid level, cell count)
    BinaryTree,       // complete binary splitting trees on [0,1): 2|m|
    Cube,             // cube partitions: |m| on tree tilings, offset code otherwise
    VectorIntervals,  // interval partitions of {1..n}
    VectorSpikes,     // singletons-plus-remainder partitions of {1..n}
};

/// Maps a partition to its nonnegative complexity weight. The per-family
/// sums of exp(-weight) stay summable, which is what the selection penalty
/// requires.
class WeightScheme {
public:
    static WeightScheme interval_grid();
    static WeightScheme binary_tree();
    static WeightScheme cube(unsigned k);
    static WeightScheme vector_intervals(std::uint32_t n);
    static WeightScheme vector_spikes(std::uint32_t n);

    WeightFamily family() const { return family_; }
    unsigned dim() const { return k_; }
    std::uint32_t ground_size() const { return n_; }

    double weight(const IntervalPartition& m) const;
    double weight(const CubePartition& m) const;
    double weight(const VectorPartition& m) const;

private:
    WeightScheme(WeightFamily f, unsigned k, std::uint32_t n) : family_(f), k_(k), n_(n) {}

    WeightFamily family_;
    unsigned k_ = 1;
    std::uint32_t n_ = 0;
};

template <typename P>
double truncated_sigma(const WeightScheme& scheme, const std::vector<P>& family) {
    KahanSum s;
    for (const auto& m : family) s.add(std::exp(-scheme.weight(m)));
    return s.value();
}

/// Exact grouped sum of exp(-weight) over every interval partition (other
/// than the trivial one) whose breakpoints live on grids of depth <=
/// max_level, with no cap on the cell count.
double interval_grid_sigma(unsigned max_level);

/// Sum of exp(-2|m|) over binary-tree partitions with at most max_leaves
/// leaves, grouped through the Catalan counts.
double binary_tree_sigma(unsigned max_leaves);

/// Numerical value of the full binary-tree series (the limit the truncated
/// sums increase to).
double binary_tree_sigma_limit();

/// Closed-form full-family sums for the two vector schemes on {1..n}.
double vector_interval_sigma(std::uint32_t n);
double vector_spike_sigma(std::uint32_t n);

/// n-choose-k evaluated in double with multiplicative accumulation.
double binomial(double n, double k);

}  // namespace phe
