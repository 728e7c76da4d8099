#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace phe {

/// Exact dyadic rational in [0,1]: value = num * 2^-level, stored in lowest
/// terms (num odd, or num == 0 with level == 0) so that equal rationals are
/// equal bit for bit.
struct DyadicPoint {
    std::uint64_t num = 0;
    unsigned level = 0;

    // Levels stay below 52 so lengths and grid indices are exact in double
    // and in 64-bit shifts.
    static constexpr unsigned kMaxLevel = 52;

    DyadicPoint() = default;

    DyadicPoint(std::uint64_t numerator, unsigned lvl) {
        if (lvl > kMaxLevel) throw std::invalid_argument("DyadicPoint: level too deep");
        while (lvl > 0 && numerator % 2 == 0 && numerator > 0) {
            numerator /= 2;
            --lvl;
        }
        if (numerator == 0) lvl = 0;
        if (numerator > (std::uint64_t{1} << lvl))
            throw std::invalid_argument("DyadicPoint: value above 1");
        num = numerator;
        level = lvl;
    }

    static DyadicPoint zero() { return DyadicPoint(0, 0); }
    static DyadicPoint one() { return DyadicPoint(1, 0); }

    double value() const { return static_cast<double>(num) / static_cast<double>(std::uint64_t{1} << level); }

    /// Numerator after rescaling to the given (coarser-or-equal) level.
    std::uint64_t num_at_level(unsigned lvl) const {
        if (lvl < level) throw std::invalid_argument("num_at_level: level too coarse");
        return num << (lvl - level);
    }

    friend bool operator==(const DyadicPoint& a, const DyadicPoint& b) {
        return a.num == b.num && a.level == b.level;
    }

    friend bool operator<(const DyadicPoint& a, const DyadicPoint& b) {
        const unsigned l = a.level > b.level ? a.level : b.level;
        return a.num_at_level(l) < b.num_at_level(l);
    }
    friend bool operator!=(const DyadicPoint& a, const DyadicPoint& b) { return !(a == b); }
    friend bool operator>(const DyadicPoint& a, const DyadicPoint& b) { return b < a; }
    friend bool operator<=(const DyadicPoint& a, const DyadicPoint& b) { return !(b < a); }
    friend bool operator>=(const DyadicPoint& a, const DyadicPoint& b) { return !(a < b); }

    std::string str() const {
        return std::to_string(num) + "/2^" + std::to_string(level);
    }
};

inline DyadicPoint dyadic_midpoint(const DyadicPoint& a, const DyadicPoint& b) {
    const unsigned l = (a.level > b.level ? a.level : b.level) + 1;
    if (l > DyadicPoint::kMaxLevel) throw std::invalid_argument("midpoint: level too deep");
    return DyadicPoint(a.num_at_level(l - 1) + b.num_at_level(l - 1), l);
}

/// Half-open axis-aligned dyadic cube: product over dims of
/// [idx_d 2^-level, (idx_d + 1) 2^-level).
struct DyadicCube {
    unsigned level = 0;
    std::vector<std::uint32_t> idx;  // one index per dimension, each < 2^level

    DyadicCube() = default;
    DyadicCube(unsigned lvl, std::vector<std::uint32_t> i) : level(lvl), idx(std::move(i)) {
        if (level > 30) throw std::invalid_argument("DyadicCube: level too deep");
        for (auto v : idx)
            if (v >= (std::uint64_t{1} << level))
                throw std::invalid_argument("DyadicCube: index out of range");
    }

    unsigned dim() const { return static_cast<unsigned>(idx.size()); }

    static DyadicCube root(unsigned k) { return DyadicCube(0, std::vector<std::uint32_t>(k, 0)); }

    double volume() const {
        double v = 1.0;
        for (unsigned d = 0; d < dim(); ++d) v *= 1.0 / static_cast<double>(std::uint64_t{1} << level);
        return v;
    }

    double lo(unsigned d) const { return static_cast<double>(idx[d]) / static_cast<double>(std::uint64_t{1} << level); }
    double hi(unsigned d) const { return static_cast<double>(idx[d] + 1) / static_cast<double>(std::uint64_t{1} << level); }

    /// The child cube at the next level selected by one bit per dimension.
    DyadicCube child(std::uint32_t corner) const {
        std::vector<std::uint32_t> c(idx.size());
        for (unsigned d = 0; d < dim(); ++d)
            c[d] = (idx[d] << 1) | ((corner >> d) & 1u);
        return DyadicCube(level + 1, std::move(c));
    }

    DyadicCube parent() const {
        if (level == 0) throw std::invalid_argument("parent of root cube");
        std::vector<std::uint32_t> c(idx.size());
        for (unsigned d = 0; d < dim(); ++d) c[d] = idx[d] >> 1;
        return DyadicCube(level - 1, std::move(c));
    }

    friend bool operator==(const DyadicCube& a, const DyadicCube& b) {
        return a.level == b.level && a.idx == b.idx;
    }
    friend bool operator!=(const DyadicCube& a, const DyadicCube& b) { return !(a == b); }

    friend bool operator<(const DyadicCube& a, const DyadicCube& b) {
        if (a.level != b.level) return a.level < b.level;
        return a.idx < b.idx;
    }
};

/// b subset-of-or-equal a (dyadic cubes are nested or disjoint).
inline bool cube_contains(const DyadicCube& a, const DyadicCube& b) {
    if (b.level < a.level || a.dim() != b.dim()) return false;
    const unsigned shift = b.level - a.level;
    for (unsigned d = 0; d < a.dim(); ++d)
        if ((b.idx[d] >> shift) != a.idx[d]) return false;
    return true;
}

inline bool cube_disjoint(const DyadicCube& a, const DyadicCube& b) {
    return !cube_contains(a, b) && !cube_contains(b, a);
}

}  // namespace phe
