#pragma once

#include <vector>

#include "phe/partition.hpp"
#include "phe/rng.hpp"

namespace phe::testing {

/// Interval partition with each interior grid point of the level-L grid
/// included independently with probability p.
inline IntervalPartition random_interval_partition(Rng& rng, unsigned max_level,
                                                   double p = 0.08) {
    std::vector<DyadicPoint> breaks{DyadicPoint::zero()};
    const std::uint64_t cells = std::uint64_t{1} << max_level;
    for (std::uint64_t i = 1; i < cells; ++i)
        if (rng.uniform() < p) breaks.emplace_back(i, max_level);
    breaks.push_back(DyadicPoint::one());
    return IntervalPartition(std::move(breaks));
}

/// Cube partition of the form "disjoint finer cubes joined with a regular
/// grid": random grid level, then random disjoint cubes strictly below it.
inline CubePartition random_cube_partition(Rng& rng, unsigned k, unsigned max_grid_level,
                                           unsigned max_cube_level, unsigned max_cubes = 6) {
    const unsigned j = static_cast<unsigned>(rng.below(max_grid_level + 1));
    std::vector<DyadicCube> p;
    const std::uint64_t attempts = rng.below(max_cubes + 1);
    for (std::uint64_t a = 0; a < attempts; ++a) {
        const unsigned level =
            j + 1 + static_cast<unsigned>(rng.below(max_cube_level - j));
        std::vector<std::uint32_t> idx(k);
        for (unsigned d = 0; d < k; ++d)
            idx[d] = static_cast<std::uint32_t>(rng.below(std::uint64_t{1} << level));
        DyadicCube candidate(level, std::move(idx));
        bool ok = true;
        for (const auto& kept : p)
            if (!cube_disjoint(kept, candidate)) {
                ok = false;
                break;
            }
        if (ok) p.push_back(std::move(candidate));
    }
    return CubePartition::spike(k, j, p);
}

/// Nondecreasing nonnegative sequence of length n.
inline std::vector<double> random_nondecreasing(Rng& rng, std::size_t n, double start_max = 2.0,
                                                double step_max = 1.0) {
    std::vector<double> f(n);
    double cur = rng.uniform(0.0, start_max);
    for (std::size_t i = 0; i < n; ++i) {
        f[i] = cur;
        if (rng.uniform() < 0.7) cur += rng.uniform(0.0, step_max);
    }
    return f;
}

}  // namespace phe::testing
