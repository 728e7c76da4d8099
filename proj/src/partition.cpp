#include "phe/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "phe/errors.hpp"

namespace phe {

// ---------------------------------------------------------------------------
// IntervalPartition
// ---------------------------------------------------------------------------

IntervalPartition::IntervalPartition(std::vector<DyadicPoint> breaks)
    : breaks_(std::move(breaks)) {
    if (breaks_.size() < 2) throw std::invalid_argument("IntervalPartition: need >= 2 breakpoints");
    if (breaks_.front() != DyadicPoint::zero() || breaks_.back() != DyadicPoint::one())
        throw std::invalid_argument("IntervalPartition: must span [0,1)");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        if (!(breaks_[i - 1] < breaks_[i]))
            throw std::invalid_argument("IntervalPartition: breakpoints not strictly increasing");
}

IntervalPartition IntervalPartition::unit() {
    return IntervalPartition({DyadicPoint::zero(), DyadicPoint::one()});
}

IntervalPartition IntervalPartition::regular(unsigned level) {
    std::vector<DyadicPoint> b;
    const std::uint64_t cells = std::uint64_t{1} << level;
    b.reserve(cells + 1);
    for (std::uint64_t i = 0; i <= cells; ++i) b.emplace_back(i, level);
    return IntervalPartition(std::move(b));
}

unsigned IntervalPartition::grid_level() const {
    unsigned l = 0;
    for (std::size_t i = 1; i + 1 < breaks_.size(); ++i) l = std::max(l, breaks_[i].level);
    return l;
}

bool IntervalPartition::is_dyadic_tiling() const {
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
        const unsigned L = std::max(breaks_[i].level, breaks_[i + 1].level);
        const std::uint64_t lo = breaks_[i].num_at_level(L);
        const std::uint64_t hi = breaks_[i + 1].num_at_level(L);
        const std::uint64_t len = hi - lo;
        if ((len & (len - 1)) != 0) return false;  // not a power of two
        if (lo % len != 0) return false;           // not aligned
    }
    return true;
}

bool operator<(const IntervalPartition& a, const IntervalPartition& b) {
    const unsigned la = a.grid_level(), lb = b.grid_level();
    if (la != lb) return la < lb;
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.breaks_.begin(), a.breaks_.end(), b.breaks_.begin(),
                                        b.breaks_.end());
}

IntervalJoin join_with_parents(const IntervalPartition& a, const IntervalPartition& b) {
    const auto& ba = a.breakpoints();
    const auto& bb = b.breakpoints();
    std::vector<DyadicPoint> merged;
    merged.reserve(ba.size() + bb.size());
    std::vector<std::pair<std::uint32_t, std::uint32_t>> parents;
    parents.reserve(ba.size() + bb.size());

    const DyadicPoint one = DyadicPoint::one();
    std::size_t i = 0, j = 0;
    DyadicPoint cur = DyadicPoint::zero();
    while (cur != one) {
        merged.push_back(cur);
        parents.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
        const DyadicPoint na = ba[i + 1];
        const DyadicPoint nb = bb[j + 1];
        const DyadicPoint next = na < nb ? na : nb;
        if (na == next) ++i;
        if (nb == next) ++j;
        cur = next;
    }
    merged.push_back(one);
    return IntervalJoin{IntervalPartition(std::move(merged)), std::move(parents)};
}

IntervalPartition join(const IntervalPartition& a, const IntervalPartition& b) {
    return join_with_parents(a, b).joined;
}

// ---------------------------------------------------------------------------
// CubeCell / CubePartition
// ---------------------------------------------------------------------------

double CubeCell::volume() const {
    double v = outer.volume();
    for (const auto& h : holes) v -= h.volume();
    return v;
}

namespace {

// Merge complete sibling groups into their parent until fixpoint; leaves the
// maximal-cube decomposition of the union of disjoint input cubes.
void merge_siblings(std::vector<DyadicCube>& holes, unsigned k) {
    const std::size_t arity = std::size_t{1} << k;
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<DyadicCube, std::vector<std::size_t>> by_parent;
        for (std::size_t i = 0; i < holes.size(); ++i)
            if (holes[i].level > 0) by_parent[holes[i].parent()].push_back(i);
        for (auto& [parent, members] : by_parent) {
            if (members.size() == arity) {
                std::vector<DyadicCube> next;
                next.reserve(holes.size() - arity + 1);
                for (std::size_t i = 0; i < holes.size(); ++i)
                    if (std::find(members.begin(), members.end(), i) == members.end())
                        next.push_back(holes[i]);
                next.push_back(parent);
                holes = std::move(next);
                changed = true;
                break;
            }
        }
    }
}

}  // namespace

bool canonicalize_cell(CubeCell& cell) {
    const unsigned k = cell.outer.dim();
    auto& holes = cell.holes;

    // Drop duplicates and holes nested in other holes.
    std::sort(holes.begin(), holes.end());
    holes.erase(std::unique(holes.begin(), holes.end()), holes.end());
    {
        std::vector<DyadicCube> kept;
        for (const auto& h : holes) {
            bool nested = false;
            for (const auto& g : holes)
                if (!(g == h) && cube_contains(g, h)) {
                    nested = true;
                    break;
                }
            if (!nested) kept.push_back(h);
        }
        holes = std::move(kept);
    }
    for (const auto& h : holes) {
        if (h == cell.outer) {
            holes.clear();
            return false;  // fully holed
        }
        if (!cube_contains(cell.outer, h))
            throw std::invalid_argument("CubeCell: hole outside outer cube");
    }

    merge_siblings(holes, k);
    if (holes.size() == 1 && holes[0] == cell.outer) return false;

    // Shrink the outer cube while the content sits in a single child.
    const std::uint32_t arity = std::uint32_t{1} << k;
    for (;;) {
        std::uint32_t content_child = arity;  // sentinel
        bool multiple = false;
        for (std::uint32_t c = 0; c < arity && !multiple; ++c) {
            const DyadicCube child = cell.outer.child(c);
            bool fully_holed = false;
            for (const auto& h : holes)
                if (h == child) {
                    fully_holed = true;
                    break;
                }
            if (fully_holed) continue;
            if (content_child == arity)
                content_child = c;
            else
                multiple = true;
        }
        if (multiple || content_child == arity) break;
        const DyadicCube child = cell.outer.child(content_child);
        std::vector<DyadicCube> inner;
        for (const auto& h : holes)
            if (cube_contains(child, h)) inner.push_back(h);
        cell.outer = child;
        holes = std::move(inner);
        if (holes.size() == 1 && holes[0] == cell.outer) return false;
    }

    std::sort(holes.begin(), holes.end());
    return true;
}

bool intersect_cells(const CubeCell& a, const CubeCell& b, CubeCell& out) {
    const CubeCell* big = &a;
    const CubeCell* small = &b;
    if (cube_contains(b.outer, a.outer)) std::swap(big, small);
    else if (!cube_contains(a.outer, b.outer)) return false;  // disjoint outers

    out.outer = small->outer;
    out.holes = small->holes;
    for (const auto& h : big->holes) {
        if (cube_contains(h, small->outer)) return false;  // whole cell removed
        if (cube_contains(small->outer, h)) out.holes.push_back(h);
    }
    return canonicalize_cell(out);
}

CubePartition::CubePartition(unsigned k, std::vector<CubeCell> cells, bool validate)
    : k_(k), cells_(std::move(cells)) {
    if (k_ == 0) throw std::invalid_argument("CubePartition: dimension must be >= 1");
    std::sort(cells_.begin(), cells_.end());
    if (validate) {
        double vol = 0.0;
        for (const auto& c : cells_) {
            if (c.outer.dim() != k_)
                throw std::invalid_argument("CubePartition: mixed dimensions");
            vol += c.volume();
        }
        // volumes are multiples of one power of two, so the sum is exact
        if (vol != 1.0) throw std::invalid_argument("CubePartition: cells do not tile the cube");
    }
}

CubePartition CubePartition::regular(unsigned k, unsigned level) {
    if (k * level > 24) throw TooLargeError("CubePartition::regular: grid too fine");
    const std::uint64_t side = std::uint64_t{1} << level;
    std::vector<CubeCell> cells;
    cells.reserve(std::size_t{1} << (k * level));
    std::vector<std::uint32_t> idx(k, 0);
    for (;;) {
        cells.push_back(CubeCell{DyadicCube(level, idx), {}});
        unsigned d = 0;
        while (d < k && ++idx[d] == side) {
            idx[d] = 0;
            ++d;
        }
        if (d == k) break;
    }
    return CubePartition(k, std::move(cells), false);
}

CubePartition CubePartition::spike(unsigned k, unsigned grid_level,
                                   const std::vector<DyadicCube>& p) {
    for (const auto& c : p) {
        if (c.dim() != k) throw std::invalid_argument("spike: cube dimension mismatch");
        if (c.level <= grid_level)
            throw std::invalid_argument("spike: cubes must be strictly finer than the grid");
    }
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (!cube_disjoint(p[i], p[j]))
                throw std::invalid_argument("spike: cubes must be disjoint");

    CubePartition grid = regular(k, grid_level);
    std::vector<CubeCell> cells;
    for (const auto& g : grid.cells()) {
        CubeCell cut{g.outer, {}};
        for (const auto& c : p)
            if (cube_contains(g.outer, c)) cut.holes.push_back(c);
        if (canonicalize_cell(cut)) cells.push_back(std::move(cut));
    }
    for (const auto& c : p) cells.push_back(CubeCell{c, {}});
    return CubePartition(k, std::move(cells));
}

bool CubePartition::is_dyadic_tiling() const {
    for (const auto& c : cells_)
        if (!c.is_pure()) return false;
    return true;
}

CubeJoin join_with_parents(const CubePartition& a, const CubePartition& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("join: cube partitions of different dimension");
    struct Entry {
        CubeCell cell;
        std::uint32_t pa, pb;
    };
    std::vector<Entry> entries;
    for (std::uint32_t i = 0; i < a.size(); ++i)
        for (std::uint32_t j = 0; j < b.size(); ++j) {
            CubeCell out;
            if (intersect_cells(a.cell(i), b.cell(j), out))
                entries.push_back(Entry{std::move(out), i, j});
        }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& x, const Entry& y) { return x.cell < y.cell; });
    std::vector<CubeCell> cells;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> parents;
    cells.reserve(entries.size());
    parents.reserve(entries.size());
    for (auto& e : entries) {
        cells.push_back(std::move(e.cell));
        parents.emplace_back(e.pa, e.pb);
    }
    return CubeJoin{CubePartition(a.dim(), std::move(cells)), std::move(parents)};
}

CubePartition join(const CubePartition& a, const CubePartition& b) {
    return join_with_parents(a, b).joined;
}

// ---------------------------------------------------------------------------
// VectorPartition
// ---------------------------------------------------------------------------

VectorPartition::VectorPartition(std::uint32_t n,
                                 std::vector<std::vector<std::uint32_t>> blocks, bool validate)
    : n_(n), blocks_(std::move(blocks)) {
    for (auto& b : blocks_) std::sort(b.begin(), b.end());
    std::sort(blocks_.begin(), blocks_.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    if (validate) {
        std::vector<bool> seen(n_, false);
        std::size_t total = 0;
        for (const auto& b : blocks_) {
            if (b.empty()) throw std::invalid_argument("VectorPartition: empty block");
            for (auto e : b) {
                if (e >= n_ || seen[e])
                    throw std::invalid_argument("VectorPartition: blocks must partition {1..n}");
                seen[e] = true;
            }
            total += b.size();
        }
        if (total != n_) throw std::invalid_argument("VectorPartition: blocks must cover {1..n}");
    }
}

VectorPartition VectorPartition::intervals(std::uint32_t n,
                                           const std::vector<std::uint32_t>& cuts) {
    std::vector<std::uint32_t> edges{0};
    for (auto c : cuts) edges.push_back(c);
    edges.push_back(n);
    std::vector<std::vector<std::uint32_t>> blocks;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (edges[i] >= edges[i + 1])
            throw std::invalid_argument("VectorPartition::intervals: cuts not increasing");
        std::vector<std::uint32_t> b;
        for (std::uint32_t e = edges[i]; e < edges[i + 1]; ++e) b.push_back(e);
        blocks.push_back(std::move(b));
    }
    return VectorPartition(n, std::move(blocks));
}

VectorPartition VectorPartition::spikes(std::uint32_t n,
                                        const std::vector<std::uint32_t>& singles) {
    std::vector<bool> single(n, false);
    for (auto s : singles) {
        if (s >= n) throw std::invalid_argument("VectorPartition::spikes: index out of range");
        single[s] = true;
    }
    std::vector<std::vector<std::uint32_t>> blocks;
    std::vector<std::uint32_t> rest;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (single[i])
            blocks.push_back({i});
        else
            rest.push_back(i);
    }
    if (!rest.empty()) blocks.push_back(std::move(rest));
    return VectorPartition(n, std::move(blocks));
}

bool VectorPartition::is_interval_form() const {
    for (const auto& b : blocks_)
        if (b.back() - b.front() + 1 != b.size()) return false;
    return true;
}

bool VectorPartition::is_spike_form() const {
    std::size_t big = 0;
    for (const auto& b : blocks_)
        if (b.size() > 1) ++big;
    return big <= 1;
}

VectorJoin join_with_parents(const VectorPartition& a, const VectorPartition& b) {
    if (a.ground_size() != b.ground_size())
        throw std::invalid_argument("join: vector partitions over different ground sets");
    const std::uint32_t n = a.ground_size();
    std::vector<std::uint32_t> label_a(n), label_b(n);
    for (std::uint32_t i = 0; i < a.size(); ++i)
        for (auto e : a.block(i)) label_a[e] = i;
    for (std::uint32_t j = 0; j < b.size(); ++j)
        for (auto e : b.block(j)) label_b[e] = j;

    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>> groups;
    for (std::uint32_t e = 0; e < n; ++e) groups[{label_a[e], label_b[e]}].push_back(e);

    struct Entry {
        std::vector<std::uint32_t> block;
        std::uint32_t pa, pb;
    };
    std::vector<Entry> entries;
    for (auto& [key, block] : groups) entries.push_back(Entry{std::move(block), key.first, key.second});
    std::sort(entries.begin(), entries.end(),
              [](const Entry& x, const Entry& y) { return x.block.front() < y.block.front(); });

    std::vector<std::vector<std::uint32_t>> blocks;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> parents;
    for (auto& e : entries) {
        blocks.push_back(std::move(e.block));
        parents.emplace_back(e.pa, e.pb);
    }
    return VectorJoin{VectorPartition(n, std::move(blocks), false), std::move(parents)};
}

VectorPartition join(const VectorPartition& a, const VectorPartition& b) {
    return join_with_parents(a, b).joined;
}

// ---------------------------------------------------------------------------
// TreePartition
// ---------------------------------------------------------------------------

TreePartition::TreePartition(unsigned k, std::vector<std::uint8_t> preorder)
    : k_(k), pre_(std::move(preorder)), splits_(0) {
    if (k_ == 0 || k_ > 16) throw std::invalid_argument("TreePartition: bad dimension");
    // validate: walk the preorder with a pending-children counter
    const std::size_t arity = std::size_t{1} << k_;
    std::size_t pending = 1;
    for (auto flag : pre_) {
        if (pending == 0) throw std::invalid_argument("TreePartition: trailing nodes");
        --pending;
        if (flag) {
            ++splits_;
            pending += arity;
        }
    }
    if (pending != 0) throw std::invalid_argument("TreePartition: truncated preorder");
}

std::size_t TreePartition::leaf_count() const {
    return pre_.size() - splits_;
}

std::vector<DyadicCube> TreePartition::leaf_cubes() const {
    std::vector<DyadicCube> leaves;
    std::vector<DyadicCube> stack{DyadicCube::root(k_)};
    const std::uint32_t arity = std::uint32_t{1} << k_;
    for (auto flag : pre_) {
        DyadicCube cur = std::move(stack.back());
        stack.pop_back();
        if (flag) {
            for (std::uint32_t c = arity; c > 0; --c) stack.push_back(cur.child(c - 1));
        } else {
            leaves.push_back(std::move(cur));
        }
    }
    return leaves;
}

IntervalPartition TreePartition::as_interval() const {
    if (k_ != 1) throw std::invalid_argument("as_interval: tree is not one-dimensional");
    std::vector<DyadicPoint> breaks{DyadicPoint::zero()};
    for (const auto& leaf : leaf_cubes())
        breaks.emplace_back(std::uint64_t{leaf.idx[0]} + 1, leaf.level);
    return IntervalPartition(std::move(breaks));
}

CubePartition TreePartition::as_cube() const {
    std::vector<CubeCell> cells;
    for (auto& leaf : leaf_cubes()) cells.push_back(CubeCell{std::move(leaf), {}});
    return CubePartition(k_, std::move(cells), false);
}

}  // namespace phe
