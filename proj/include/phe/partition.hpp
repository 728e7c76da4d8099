#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "phe/dyadic.hpp"

namespace phe {

// ---------------------------------------------------------------------------
// Interval partitions of [0,1)
// ---------------------------------------------------------------------------

struct IntervalCell {
    DyadicPoint lo, hi;
    double length() const { return hi.value() - lo.value(); }
};

/// Finite partition of [0,1) into half-open intervals with exact dyadic
/// breakpoints. Immutable after construction; the model index m.
class IntervalPartition {
public:
    /// breaks must be strictly increasing, starting at 0 and ending at 1.
    explicit IntervalPartition(std::vector<DyadicPoint> breaks);

    static IntervalPartition unit();
    /// 2^level equal cells.
    static IntervalPartition regular(unsigned level);

    std::size_t size() const { return breaks_.size() - 1; }
    IntervalCell cell(std::size_t i) const { return {breaks_[i], breaks_[i + 1]}; }
    const std::vector<DyadicPoint>& breakpoints() const { return breaks_; }

    /// Smallest l with every interior breakpoint on the grid of step 2^-l.
    unsigned grid_level() const;

    /// True when every cell is itself a dyadic interval, i.e. the partition
    /// comes from a complete binary splitting tree.
    bool is_dyadic_tiling() const;

    friend bool operator==(const IntervalPartition& a, const IntervalPartition& b) {
        return a.breaks_ == b.breaks_;
    }
    friend bool operator!=(const IntervalPartition& a, const IntervalPartition& b) {
        return !(a == b);
    }
    /// Order by (grid level, cell count, lexicographic breakpoints); the
    /// deterministic enumeration order used everywhere.
    friend bool operator<(const IntervalPartition& a, const IntervalPartition& b);

private:
    std::vector<DyadicPoint> breaks_;
};

struct IntervalJoin {
    IntervalPartition joined;
    // For each join cell, the indices of the cells of the two parents it
    // lies in.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> parents;
};

IntervalJoin join_with_parents(const IntervalPartition& a, const IntervalPartition& b);
IntervalPartition join(const IntervalPartition& a, const IntervalPartition& b);

// ---------------------------------------------------------------------------
// Cube partitions of [0,1)^k
// ---------------------------------------------------------------------------

/// One cell: a dyadic cube minus a canonical set of disjoint strictly finer
/// sub-cubes. Canonical form: holes are the maximal dyadic cubes of the
/// removed region, the outer cube is the smallest cube containing the cell,
/// and holes are sorted. Pure cubes have no holes.
struct CubeCell {
    DyadicCube outer;
    std::vector<DyadicCube> holes;

    bool is_pure() const { return holes.empty(); }
    double volume() const;

    friend bool operator==(const CubeCell& a, const CubeCell& b) {
        return a.outer == b.outer && a.holes == b.holes;
    }
    friend bool operator<(const CubeCell& a, const CubeCell& b) {
        if (!(a.outer == b.outer)) return a.outer < b.outer;
        return a.holes < b.holes;
    }
};

/// Canonicalize outer minus holes. Returns false when the holes tile the
/// whole outer cube (empty cell). Handles nested/duplicate holes.
bool canonicalize_cell(CubeCell& cell);

/// Intersection of two canonical cells; false when empty.
bool intersect_cells(const CubeCell& a, const CubeCell& b, CubeCell& out);

/// Partition of [0,1)^k into cube-minus-holes cells; cells are kept sorted so
/// equal partitions compare equal bit for bit.
class CubePartition {
public:
    CubePartition(unsigned k, std::vector<CubeCell> cells, bool validate = true);

    /// Regular grid of 2^(k*level) cubes.
    static CubePartition regular(unsigned k, unsigned level);

    /// The partition generated by disjoint finer cubes `p` joined with the
    /// regular grid at `grid_level`: the cubes of p, plus each grid cube
    /// minus the members of p inside it. Requires every cube of p strictly
    /// finer than the grid.
    static CubePartition spike(unsigned k, unsigned grid_level, const std::vector<DyadicCube>& p);

    unsigned dim() const { return k_; }
    std::size_t size() const { return cells_.size(); }
    const CubeCell& cell(std::size_t i) const { return cells_[i]; }
    const std::vector<CubeCell>& cells() const { return cells_; }

    /// True when every cell is a pure cube, i.e. the partition comes from a
    /// complete 2^k-ary splitting tree.
    bool is_dyadic_tiling() const;

    friend bool operator==(const CubePartition& a, const CubePartition& b) {
        return a.k_ == b.k_ && a.cells_ == b.cells_;
    }
    friend bool operator!=(const CubePartition& a, const CubePartition& b) { return !(a == b); }

private:
    unsigned k_;
    std::vector<CubeCell> cells_;
};

struct CubeJoin {
    CubePartition joined;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> parents;
};

CubeJoin join_with_parents(const CubePartition& a, const CubePartition& b);
CubePartition join(const CubePartition& a, const CubePartition& b);

// ---------------------------------------------------------------------------
// Partitions of {1,...,n}
// ---------------------------------------------------------------------------

/// Set partition of {1,...,n} (stored 0-based internally, blocks sorted by
/// smallest element). Covers both the interval form and the
/// singletons-plus-remainder form, and stays closed under join.
class VectorPartition {
public:
    VectorPartition(std::uint32_t n, std::vector<std::vector<std::uint32_t>> blocks,
                    bool validate = true);

    /// Partition into consecutive intervals; cuts are the interior split
    /// positions (0 < c < n), e.g. cuts={2,5} on n=8 gives [0,2),[2,5),[5,8).
    static VectorPartition intervals(std::uint32_t n, const std::vector<std::uint32_t>& cuts);

    /// Singletons at the given (0-based) positions plus one remainder block.
    static VectorPartition spikes(std::uint32_t n, const std::vector<std::uint32_t>& singles);

    std::uint32_t ground_size() const { return n_; }
    std::size_t size() const { return blocks_.size(); }
    const std::vector<std::uint32_t>& block(std::size_t i) const { return blocks_[i]; }
    const std::vector<std::uint32_t>& cell(std::size_t i) const { return blocks_[i]; }
    const std::vector<std::vector<std::uint32_t>>& blocks() const { return blocks_; }

    bool is_interval_form() const;
    /// At most one block of size > 1.
    bool is_spike_form() const;

    friend bool operator==(const VectorPartition& a, const VectorPartition& b) {
        return a.n_ == b.n_ && a.blocks_ == b.blocks_;
    }
    friend bool operator!=(const VectorPartition& a, const VectorPartition& b) { return !(a == b); }

private:
    std::uint32_t n_;
    std::vector<std::vector<std::uint32_t>> blocks_;
};

struct VectorJoin {
    VectorPartition joined;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> parents;
};

VectorJoin join_with_parents(const VectorPartition& a, const VectorPartition& b);
VectorPartition join(const VectorPartition& a, const VectorPartition& b);

// ---------------------------------------------------------------------------
// Complete 2^k-ary splitting trees
// ---------------------------------------------------------------------------

/// A complete 2^k-ary tree encoded as preorder flags (1 = internal node with
/// exactly 2^k children, 0 = leaf). Leaves are dyadic cubes tiling [0,1)^k.
class TreePartition {
public:
    TreePartition(unsigned k, std::vector<std::uint8_t> preorder);

    static TreePartition root(unsigned k) { return TreePartition(k, {0}); }

    /// Recursively splits every cube for which `should_split` returns true.
    template <typename Pred>
    static TreePartition grow(unsigned k, Pred&& should_split, unsigned max_depth = 24);

    unsigned dim() const { return k_; }
    std::size_t splits() const { return splits_; }
    std::size_t leaf_count() const;
    const std::vector<std::uint8_t>& preorder() const { return pre_; }

    /// Leaves in depth-first order.
    std::vector<DyadicCube> leaf_cubes() const;

    IntervalPartition as_interval() const;  // k == 1 only
    CubePartition as_cube() const;

    friend bool operator==(const TreePartition& a, const TreePartition& b) {
        return a.k_ == b.k_ && a.pre_ == b.pre_;
    }
    friend bool operator!=(const TreePartition& a, const TreePartition& b) { return !(a == b); }

private:
    unsigned k_;
    std::vector<std::uint8_t> pre_;
    std::size_t splits_;
};

template <typename Pred>
TreePartition TreePartition::grow(unsigned k, Pred&& should_split, unsigned max_depth) {
    std::vector<std::uint8_t> pre;
    const std::uint32_t arity = std::uint32_t{1} << k;
    auto rec = [&](auto&& self, const DyadicCube& c) -> void {
        if (c.level < max_depth && should_split(c)) {
            pre.push_back(1);
            for (std::uint32_t i = 0; i < arity; ++i) self(self, c.child(i));
        } else {
            pre.push_back(0);
        }
    };
    rec(rec, DyadicCube::root(k));
    return TreePartition(k, std::move(pre));
}

// ---------------------------------------------------------------------------

/// Checks |m v m'| <= delta (|m| + |m'|) over all pairs of the family.
template <typename P>
bool delta_bound_check(const std::vector<P>& family, double delta) {
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i; j < family.size(); ++j) {
            const auto joined = join(family[i], family[j]);
            const double bound = delta * (static_cast<double>(family[i].size()) +
                                          static_cast<double>(family[j].size()));
            if (static_cast<double>(joined.size()) > bound) return false;
        }
    return true;
}

}  // namespace phe
