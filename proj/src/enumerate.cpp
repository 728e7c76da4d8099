#include "phe/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phe/errors.hpp"

namespace phe {

namespace {

double log_binomial(double n, double k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// Calls visit(indices) for every subset of {0..pool-1} of size exactly r,
/// in lexicographic order.
template <typename F>
void for_each_combination(std::size_t pool, std::size_t r, F&& visit) {
    if (r > pool) return;
    std::vector<std::size_t> idx(r);
    if (r == 0) {
        visit(idx);
        return;
    }
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    for (;;) {
        visit(idx);
        // advance
        std::size_t i = r;
        while (i > 0) {
            --i;
            if (idx[i] != i + pool - r) break;
            if (i == 0) return;
        }
        if (idx[i] == i + pool - r) return;
        ++idx[i];
        for (std::size_t j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

double interval_family_count(unsigned max_level, std::size_t max_cells) {
    if (max_cells < 1) throw std::invalid_argument("max_cells must be >= 1");
    const double points = max_level == 0 ? 0.0 : std::pow(2.0, max_level) - 1.0;
    double total = 0.0;
    const std::size_t r_max = max_cells - 1;
    for (std::size_t r = 0; r <= r_max && static_cast<double>(r) <= points; ++r)
        total += std::exp(log_binomial(points, static_cast<double>(r)));
    return total;
}

std::vector<IntervalPartition> enumerate_interval_family(unsigned max_level,
                                                         std::size_t max_cells,
                                                         std::size_t cap) {
    if (max_cells < 1) throw std::invalid_argument("max_cells must be >= 1");
    if (max_level > 30) throw std::invalid_argument("max_level too deep to enumerate");
    const double count = interval_family_count(max_level, max_cells);
    if (count > static_cast<double>(cap))
        throw TooLargeError("interval family has ~" + std::to_string(count) +
                            " members, above the cap of " + std::to_string(cap));

    // interior grid points of the level-L grid
    std::vector<DyadicPoint> grid;
    const std::uint64_t cells = max_level == 0 ? 1 : (std::uint64_t{1} << max_level);
    for (std::uint64_t i = 1; i < cells; ++i) grid.emplace_back(i, max_level);

    std::vector<IntervalPartition> family;
    const std::size_t r_max = std::min<std::size_t>(max_cells - 1, grid.size());
    for (std::size_t r = 0; r <= r_max; ++r) {
        for_each_combination(grid.size(), r, [&](const std::vector<std::size_t>& idx) {
            std::vector<DyadicPoint> breaks;
            breaks.reserve(r + 2);
            breaks.push_back(DyadicPoint::zero());
            for (auto i : idx) breaks.push_back(grid[i]);
            breaks.push_back(DyadicPoint::one());
            family.emplace_back(std::move(breaks));
        });
    }
    std::sort(family.begin(), family.end());
    return family;
}

std::vector<IntervalPartition> enumerate_regular_family(unsigned min_level, unsigned max_level) {
    if (min_level > max_level) throw std::invalid_argument("min_level > max_level");
    std::vector<IntervalPartition> family;
    for (unsigned l = min_level; l <= max_level; ++l)
        family.push_back(IntervalPartition::regular(l));
    return family;
}

std::vector<TreePartition> enumerate_tree_family(unsigned k, unsigned max_splits,
                                                 std::size_t cap) {
    if (k < 1) throw std::invalid_argument("tree dimension must be >= 1");
    const std::size_t arity = std::size_t{1} << k;

    // exact[j] = preorder encodings of trees with exactly j internal nodes
    std::vector<std::vector<std::vector<std::uint8_t>>> exact(max_splits + 1);
    exact[0] = {{0}};
    std::size_t total = 1;

    for (unsigned j = 1; j <= max_splits; ++j) {
        std::vector<std::vector<std::uint8_t>> out;
        // distribute j-1 splits over the arity children
        std::vector<unsigned> comp(arity, 0);
        std::vector<const std::vector<std::uint8_t>*> pick(arity);
        auto assemble = [&](auto&& self, std::size_t child, unsigned remaining) -> void {
            if (child + 1 == arity) {
                comp[child] = remaining;
                // choose one tree per child with the given split counts
                auto choose = [&](auto&& inner, std::size_t c) -> void {
                    if (c == arity) {
                        std::vector<std::uint8_t> pre{1};
                        for (std::size_t d = 0; d < arity; ++d)
                            pre.insert(pre.end(), pick[d]->begin(), pick[d]->end());
                        out.push_back(std::move(pre));
                        if (++total > cap)
                            throw TooLargeError("tree family exceeds the cap of " +
                                                std::to_string(cap));
                        return;
                    }
                    for (const auto& t : exact[comp[c]]) {
                        pick[c] = &t;
                        inner(inner, c + 1);
                    }
                };
                choose(choose, 0);
                return;
            }
            for (unsigned take = 0; take <= remaining; ++take) {
                comp[child] = take;
                self(self, child + 1, remaining - take);
            }
        };
        assemble(assemble, 0, j - 1);
        exact[j] = std::move(out);
    }

    std::vector<TreePartition> family;
    family.reserve(total);
    for (unsigned j = 0; j <= max_splits; ++j)
        for (auto& pre : exact[j]) family.emplace_back(k, pre);
    return family;
}

std::vector<VectorPartition> enumerate_vector_interval_family(std::uint32_t n,
                                                              std::size_t max_blocks,
                                                              std::size_t cap) {
    if (n < 1 || max_blocks < 1) throw std::invalid_argument("bad vector family parameters");
    double count = 0.0;
    for (std::size_t d = 1; d <= std::min<std::size_t>(max_blocks, n); ++d)
        count += std::exp(log_binomial(n - 1.0, d - 1.0));
    if (count > static_cast<double>(cap))
        throw TooLargeError("vector interval family exceeds the cap");

    std::vector<VectorPartition> family;
    const std::size_t r_max = std::min<std::size_t>(max_blocks - 1, n - 1);
    for (std::size_t r = 0; r <= r_max; ++r) {
        for_each_combination(n - 1, r, [&](const std::vector<std::size_t>& idx) {
            std::vector<std::uint32_t> cuts;
            cuts.reserve(r);
            for (auto i : idx) cuts.push_back(static_cast<std::uint32_t>(i + 1));
            family.push_back(VectorPartition::intervals(n, cuts));
        });
    }
    return family;
}

std::vector<VectorPartition> enumerate_vector_spike_family(std::uint32_t n,
                                                           std::uint32_t max_singles,
                                                           std::size_t cap) {
    if (n < 1) throw std::invalid_argument("bad vector family parameters");
    max_singles = std::min(max_singles, n - 1);
    double count = 0.0;
    for (std::uint32_t s = 0; s <= max_singles; ++s)
        count += std::exp(log_binomial(n, s));
    if (count > static_cast<double>(cap))
        throw TooLargeError("vector spike family exceeds the cap");

    std::vector<VectorPartition> family;
    for (std::uint32_t s = 0; s <= max_singles; ++s) {
        for_each_combination(n, s, [&](const std::vector<std::size_t>& idx) {
            std::vector<std::uint32_t> singles(idx.begin(), idx.end());
            family.push_back(VectorPartition::spikes(n, singles));
        });
    }
    // distinct subsets can induce the same partition near the boundary
    std::sort(family.begin(), family.end(), [](const VectorPartition& a, const VectorPartition& b) {
        return a.blocks() < b.blocks();
    });
    family.erase(std::unique(family.begin(), family.end()), family.end());
    return family;
}

}  // namespace phe
