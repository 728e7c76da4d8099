#include <doctest.h>

#include "phe/partition.hpp"
#include "support/random_partitions.hpp"

using namespace phe;

namespace {

IntervalPartition from_halves(std::initializer_list<std::pair<std::uint64_t, unsigned>> pts) {
    std::vector<DyadicPoint> b{DyadicPoint::zero()};
    for (auto [num, level] : pts) b.emplace_back(num, level);
    b.push_back(DyadicPoint::one());
    return IntervalPartition(std::move(b));
}

}  // namespace

TEST_CASE("join of the trivial partition with itself is trivial") {
    const auto m0 = IntervalPartition::unit();
    CHECK(join(m0, m0) == m0);
}

TEST_CASE("join merges breakpoints") {
    const auto a = from_halves({{1, 1}});          // {[0,1/2),[1/2,1)}
    const auto b = from_halves({{1, 2}});          // {[0,1/4),[1/4,1)}
    const auto expected = from_halves({{1, 2}, {1, 1}});
    CHECK(join(a, b) == expected);
    CHECK(join(b, a) == expected);

    // brute-force oracle: pairwise intersections of the cells
    std::size_t nonempty = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            const auto ca = a.cell(i), cb = b.cell(j);
            const auto lo = std::max(ca.lo, cb.lo);
            const auto hi = std::min(ca.hi, cb.hi);
            if (lo < hi) ++nonempty;
        }
    CHECK(nonempty == join(a, b).size());
}

TEST_CASE("join provenance maps every join cell into both parents") {
    Rng rng(31);
    for (int rep = 0; rep < 50; ++rep) {
        const auto a = phe::testing::random_interval_partition(rng, 6, 0.2);
        const auto b = phe::testing::random_interval_partition(rng, 6, 0.2);
        const auto J = join_with_parents(a, b);
        REQUIRE(J.parents.size() == J.joined.size());
        for (std::size_t idx = 0; idx < J.joined.size(); ++idx) {
            const auto cell = J.joined.cell(idx);
            const auto [pa, pb] = J.parents[idx];
            CHECK(a.cell(pa).lo <= cell.lo);
            CHECK(cell.hi <= a.cell(pa).hi);
            CHECK(b.cell(pb).lo <= cell.lo);
            CHECK(cell.hi <= b.cell(pb).hi);
        }
    }
}

TEST_CASE("interval join size bound |m v m'| <= |m|+|m'|-1") {
    Rng rng(7);
    for (int rep = 0; rep < 200; ++rep) {
        const auto a = phe::testing::random_interval_partition(rng, 8);
        const auto b = phe::testing::random_interval_partition(rng, 8);
        CHECK(join(a, b).size() <= a.size() + b.size() - 1);
    }
}

TEST_CASE("grid level is the deepest canonical breakpoint") {
    CHECK(IntervalPartition::unit().grid_level() == 0);
    CHECK(from_halves({{1, 1}}).grid_level() == 1);
    CHECK(from_halves({{1, 2}, {1, 1}, {3, 2}}).grid_level() == 2);
    CHECK(IntervalPartition::regular(3).grid_level() == 3);
}

TEST_CASE("dyadic tilings are recognized") {
    CHECK(IntervalPartition::unit().is_dyadic_tiling());
    CHECK(IntervalPartition::regular(4).is_dyadic_tiling());
    CHECK(from_halves({{1, 2}, {1, 1}}).is_dyadic_tiling());   // 1/4,1/2 -> ok
    CHECK(!from_halves({{1, 2}, {3, 2}}).is_dyadic_tiling());  // middle cell [1/4,3/4)
}

TEST_CASE("cube cell canonicalization shrinks and merges") {
    const DyadicCube root = DyadicCube::root(2);

    SUBCASE("holes tiling a sibling group merge into the parent") {
        CubeCell cell{root, {}};
        for (std::uint32_t c = 0; c < 4; ++c) cell.holes.push_back(root.child(0).child(c));
        REQUIRE(canonicalize_cell(cell));
        CHECK(cell.holes.size() == 1);
        CHECK(cell.holes[0] == root.child(0));
    }

    SUBCASE("content confined to one child shrinks the outer cube") {
        CubeCell cell{root, {root.child(0), root.child(1), root.child(2)}};
        REQUIRE(canonicalize_cell(cell));
        CHECK(cell.outer == root.child(3));
        CHECK(cell.holes.empty());
    }

    SUBCASE("fully holed cells are empty") {
        CubeCell cell{root, {}};
        for (std::uint32_t c = 0; c < 4; ++c) cell.holes.push_back(root.child(c));
        CHECK(!canonicalize_cell(cell));
    }

    SUBCASE("nested holes collapse") {
        CubeCell cell{root, {root.child(0), root.child(0).child(1)}};
        REQUIRE(canonicalize_cell(cell));
        CHECK(cell.holes.size() == 1);
        CHECK(cell.holes[0] == root.child(0));
    }
}

TEST_CASE("cube partitions tile exactly and join with provenance") {
    const auto grid1 = CubePartition::regular(2, 1);
    CHECK(grid1.size() == 4);
    CHECK(grid1.is_dyadic_tiling());

    const DyadicCube spike_cube(2, {1, 1});
    const auto spiky = CubePartition::spike(2, 0, {spike_cube});
    CHECK(spiky.size() == 2);
    CHECK(!spiky.is_dyadic_tiling());

    const auto J = join_with_parents(grid1, spiky);
    double vol = 0.0;
    for (std::size_t i = 0; i < J.joined.size(); ++i) {
        const auto& cell = J.joined.cell(i);
        vol += cell.volume();
        const auto [pa, pb] = J.parents[i];
        CHECK(pa < grid1.size());
        CHECK(pb < spiky.size());
    }
    CHECK(vol == 1.0);
}

TEST_CASE("cube join obeys the doubled size bound") {
    Rng rng(99);
    for (int rep = 0; rep < 100; ++rep) {
        const auto a = phe::testing::random_cube_partition(rng, 2, 2, 4);
        const auto b = phe::testing::random_cube_partition(rng, 2, 2, 4);
        const auto j = join(a, b);
        CHECK(j.size() <= 2 * (a.size() + b.size()));
        CHECK(join(b, a) == j);
    }
}

TEST_CASE("join is commutative, associative and idempotent on all kinds") {
    Rng rng(4242);
    for (int rep = 0; rep < 50; ++rep) {
        const auto a = phe::testing::random_interval_partition(rng, 6, 0.15);
        const auto b = phe::testing::random_interval_partition(rng, 6, 0.15);
        const auto c = phe::testing::random_interval_partition(rng, 6, 0.15);
        CHECK(join(a, b) == join(b, a));
        CHECK(join(join(a, b), c) == join(a, join(b, c)));
        CHECK(join(a, a) == a);
    }
    for (int rep = 0; rep < 30; ++rep) {
        const auto a = phe::testing::random_cube_partition(rng, 2, 2, 4);
        const auto b = phe::testing::random_cube_partition(rng, 2, 2, 4);
        const auto c = phe::testing::random_cube_partition(rng, 2, 2, 4);
        CHECK(join(a, b) == join(b, a));
        CHECK(join(join(a, b), c) == join(a, join(b, c)));
        CHECK(join(a, a) == a);
    }
}

TEST_CASE("vector partitions join by refining blocks") {
    const auto a = VectorPartition::intervals(8, {4});
    const auto b = VectorPartition::intervals(8, {2, 6});
    const auto j = join(a, b);
    CHECK(j.size() == 4);
    CHECK(j.is_interval_form());
    CHECK(join(b, a) == j);
    CHECK(join(a, a) == a);

    const auto s = VectorPartition::spikes(8, {3, 5});
    CHECK(s.size() == 3);
    CHECK(s.is_spike_form());
    CHECK(!s.is_interval_form());
}

TEST_CASE("vector join provenance covers the ground set") {
    const auto a = VectorPartition::spikes(10, {2});
    const auto b = VectorPartition::intervals(10, {5});
    const auto J = join_with_parents(a, b);
    std::size_t covered = 0;
    for (std::size_t i = 0; i < J.joined.size(); ++i) {
        covered += J.joined.block(i).size();
        const auto [pa, pb] = J.parents[i];
        for (auto e : J.joined.block(i)) {
            // every element of the join block must lie in both parent blocks
            const auto& ba = a.block(pa);
            const auto& bb = b.block(pb);
            CHECK(std::find(ba.begin(), ba.end(), e) != ba.end());
            CHECK(std::find(bb.begin(), bb.end(), e) != bb.end());
        }
    }
    CHECK(covered == 10);
}

TEST_CASE("delta bound check on interval and singleton families") {
    Rng rng(11);
    std::vector<IntervalPartition> family;
    for (int i = 0; i < 10; ++i)
        family.push_back(phe::testing::random_interval_partition(rng, 5, 0.2));
    CHECK(delta_bound_check(family, 1.0));

    std::vector<IntervalPartition> single{family[0]};
    CHECK(delta_bound_check(single, 1.0));
}

TEST_CASE("tree partitions decode to interval partitions") {
    // root split, left child split: leaves [0,1/4),[1/4,1/2),[1/2,1)
    const TreePartition t(1, {1, 1, 0, 0, 0});
    CHECK(t.splits() == 2);
    CHECK(t.leaf_count() == 3);
    const auto m = t.as_interval();
    CHECK(m.size() == 3);
    CHECK(m == from_halves({{1, 2}, {1, 1}}));
    CHECK(m.is_dyadic_tiling());
}

TEST_CASE("tree validation rejects malformed preorders") {
    CHECK_THROWS_AS(TreePartition(1, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(TreePartition(1, {0, 0}), std::invalid_argument);
}

TEST_CASE("grown trees tile the square") {
    const auto t = TreePartition::grow(2, [](const DyadicCube& c) { return c.level < 1; });
    CHECK(t.leaf_count() == 4);
    const auto cube = t.as_cube();
    CHECK(cube.size() == 4);
    CHECK(cube.is_dyadic_tiling());
}
