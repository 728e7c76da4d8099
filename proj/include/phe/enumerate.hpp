#pragma once

#include <cstdint>
#include <vector>

#include "phe/partition.hpp"

namespace phe {

/// Number of interval partitions with interior breakpoints in the level-L
/// grid and at most max_cells cells (including the trivial partition).
double interval_family_count(unsigned max_level, std::size_t max_cells);

/// Every interval partition with breakpoints in the dyadic grid of depth
/// max_level and at most max_cells cells, plus the trivial partition.
/// Deterministic order: (grid level, cell count, lexicographic breakpoints).
/// Throws TooLargeError when the family would exceed `cap` members.
std::vector<IntervalPartition> enumerate_interval_family(unsigned max_level,
                                                         std::size_t max_cells,
                                                         std::size_t cap = 200000);

/// Regular dyadic partitions with 2^l cells for l in [min_level, max_level].
std::vector<IntervalPartition> enumerate_regular_family(unsigned min_level, unsigned max_level);

/// All complete 2^k-ary splitting trees with at most max_splits internal
/// nodes, ordered by split count then by recursive construction order.
std::vector<TreePartition> enumerate_tree_family(unsigned k, unsigned max_splits,
                                                 std::size_t cap = 200000);

/// Partitions of {1..n} into at most max_blocks consecutive intervals.
std::vector<VectorPartition> enumerate_vector_interval_family(std::uint32_t n,
                                                              std::size_t max_blocks,
                                                              std::size_t cap = 200000);

/// Partitions of {1..n} into k singletons plus a remainder, k <= max_singles.
std::vector<VectorPartition> enumerate_vector_spike_family(std::uint32_t n,
                                                           std::uint32_t max_singles,
                                                           std::size_t cap = 200000);

}  // namespace phe
