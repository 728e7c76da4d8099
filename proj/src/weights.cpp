#include "phe/weights.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace phe {

namespace {
constexpr double kLog2 = 0.6931471805599453094;
}

double binomial(double n, double k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double res = 1.0;
    for (double i = 1.0; i <= k; i += 1.0) res *= (n - k + i) / i;
    return res;
}

WeightScheme WeightScheme::interval_grid() { return WeightScheme(WeightFamily::IntervalGrid, 1, 0); }
WeightScheme WeightScheme::binary_tree() { return WeightScheme(WeightFamily::BinaryTree, 1, 0); }
WeightScheme WeightScheme::cube(unsigned k) {
    if (k < 2) throw std::invalid_argument("cube weights need dimension >= 2");
    return WeightScheme(WeightFamily::Cube, k, 0);
}
WeightScheme WeightScheme::vector_intervals(std::uint32_t n) {
    return WeightScheme(WeightFamily::VectorIntervals, 1, n);
}
WeightScheme WeightScheme::vector_spikes(std::uint32_t n) {
    return WeightScheme(WeightFamily::VectorSpikes, 1, n);
}

double WeightScheme::weight(const IntervalPartition& m) const {
    switch (family_) {
        case WeightFamily::IntervalGrid: {
            const double d = static_cast<double>(m.size());
            if (d == 1.0) return 1.0;
            const double l = static_cast<double>(m.grid_level());
            return d * (l * kLog2 + 2.0 - std::log(d)) + 2.0 * std::log(l);
        }
        case WeightFamily::BinaryTree: {
            if (!m.is_dyadic_tiling())
                throw std::invalid_argument("weight: partition is not a binary-tree tiling");
            return 2.0 * static_cast<double>(m.size());
        }
        default:
            throw std::invalid_argument("weight: interval partition outside scheme family");
    }
}

namespace {

/// Valid grid levels j for representing a cube partition as disjoint finer
/// cubes joined with the regular grid at level j, together with the weight
/// j + k * sum of levels of the finer cubes.
double cube_offset_weight(const CubePartition& m, unsigned k) {
    unsigned j_max = std::numeric_limits<unsigned>::max();
    for (const auto& c : m.cells())
        if (!c.is_pure()) j_max = std::min(j_max, c.outer.level);
    if (j_max == std::numeric_limits<unsigned>::max())
        throw std::invalid_argument("cube_offset_weight: tree tiling has no offset code");

    double best = std::numeric_limits<double>::infinity();
    for (unsigned j = 0; j <= j_max; ++j) {
        bool ok = true;
        // no pure cell may be coarser than the grid
        for (const auto& c : m.cells())
            if (c.is_pure() && c.outer.level < j) {
                ok = false;
                break;
            }
        if (!ok) continue;
        // cut cells must sit in distinct grid cubes
        std::vector<DyadicCube> ancestors;
        for (const auto& c : m.cells()) {
            if (c.is_pure()) continue;
            DyadicCube anc = c.outer;
            while (anc.level > j) anc = anc.parent();
            for (const auto& seen : ancestors)
                if (seen == anc) {
                    ok = false;
                    break;
                }
            if (!ok) break;
            ancestors.push_back(anc);
        }
        if (!ok) continue;
        double w = static_cast<double>(j);
        for (const auto& c : m.cells())
            if (c.is_pure() && c.outer.level > j)
                w += static_cast<double>(k) * static_cast<double>(c.outer.level);
        best = std::min(best, w);
    }
    if (!std::isfinite(best))
        throw std::invalid_argument("weight: cube partition is not in the family");
    return best;
}

}  // namespace

double WeightScheme::weight(const CubePartition& m) const {
    if (family_ != WeightFamily::Cube)
        throw std::invalid_argument("weight: cube partition outside scheme family");
    if (m.dim() != k_) throw std::invalid_argument("weight: dimension mismatch");
    if (m.is_dyadic_tiling()) return static_cast<double>(m.size());
    return cube_offset_weight(m, k_);
}

double WeightScheme::weight(const VectorPartition& m) const {
    if (n_ != m.ground_size())
        throw std::invalid_argument("weight: vector partition over wrong ground set");
    const double n = static_cast<double>(n_);
    const double blocks = static_cast<double>(m.size());
    switch (family_) {
        case WeightFamily::VectorIntervals: {
            if (!m.is_interval_form())
                throw std::invalid_argument("weight: partition is not into intervals");
            return blocks + std::log(binomial(n - 1.0, blocks - 1.0));
        }
        case WeightFamily::VectorSpikes: {
            if (!m.is_spike_form())
                throw std::invalid_argument("weight: partition is not singletons plus remainder");
            const double k = blocks - 1.0;
            return std::log(binomial(n, k)) + k;
        }
        default:
            throw std::invalid_argument("weight: vector partition outside scheme family");
    }
}

double interval_grid_sigma(unsigned max_level) {
    KahanSum total;
    for (unsigned l = 1; l <= max_level; ++l) {
        const double points = std::pow(2.0, l) - 1.0;
        const double coarser = l == 1 ? 0.0 : std::pow(2.0, l - 1) - 1.0;
        const double cells = std::pow(2.0, l);
        for (double d = 2.0; d <= cells; d += 1.0) {
            const double count = binomial(points, d - 1.0) - binomial(coarser, d - 1.0);
            if (count <= 0.0) continue;
            const double delta = d * (l * kLog2 + 2.0 - std::log(d)) + 2.0 * std::log(double(l));
            total.add(count * std::exp(-delta));
        }
    }
    return total.value();
}

double binary_tree_sigma(unsigned max_leaves) {
    KahanSum total;
    for (unsigned leaves = 1; leaves <= max_leaves; ++leaves) {
        const double j = static_cast<double>(leaves - 1);
        const double catalan = binomial(2.0 * j, j) / (j + 1.0);
        total.add(catalan * std::exp(-2.0 * static_cast<double>(leaves)));
    }
    return total.value();
}

double binary_tree_sigma_limit() {
    const double x = (2.0 / std::exp(1.0)) * (2.0 / std::exp(1.0));
    KahanSum s;
    double pow_x = 1.0;
    for (unsigned j = 0; j < 4000; ++j) {
        const double term = pow_x / (j + 1.0);
        s.add(term);
        if (term < 1e-18) break;
        pow_x *= x;
    }
    return std::exp(-2.0) * s.value();
}

double vector_interval_sigma(std::uint32_t n) {
    KahanSum s;
    for (std::uint32_t d = 1; d <= n; ++d) s.add(std::exp(-static_cast<double>(d)));
    return s.value();
}

double vector_spike_sigma(std::uint32_t n) {
    KahanSum s;
    for (std::uint32_t k = 0; k < n; ++k) s.add(std::exp(-static_cast<double>(k)));
    return s.value();
}

}  // namespace phe
