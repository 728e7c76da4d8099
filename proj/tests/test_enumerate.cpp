#include <doctest.h>

#include <map>

#include "phe/enumerate.hpp"
#include "phe/errors.hpp"
#include "phe/weights.hpp"

using namespace phe;

TEST_CASE("interval family at depth 1 with two cells") {
    const auto fam = enumerate_interval_family(1, 2);
    REQUIRE(fam.size() == 2);
    CHECK(fam[0] == IntervalPartition::unit());
    CHECK(fam[1] == IntervalPartition::regular(1));
}

TEST_CASE("interval family at depth 2 has all breakpoint subsets") {
    const auto fam = enumerate_interval_family(2, 4);
    CHECK(fam.size() == 8);  // subsets of {1/4, 1/2, 3/4}
    // deterministic order: level, then cell count, then lexicographic
    CHECK(fam[0] == IntervalPartition::unit());
    CHECK(fam[1] == IntervalPartition::regular(1));
    for (std::size_t i = 1; i < fam.size(); ++i) {
        const bool ordered = fam[i - 1] < fam[i];
        CHECK(ordered);
    }
}

TEST_CASE("trivial truncation yields only the unit partition") {
    const auto fam = enumerate_interval_family(0, 1);
    REQUIRE(fam.size() == 1);
    CHECK(fam[0] == IntervalPartition::unit());
}

TEST_CASE("family count matches the enumerated size") {
    CHECK(interval_family_count(2, 4) == doctest::Approx(8));
    CHECK(interval_family_count(3, 8) == doctest::Approx(128));
    const auto fam = enumerate_interval_family(3, 8);
    CHECK(fam.size() == 128);
}

TEST_CASE("enumeration refuses to materialize oversized families") {
    CHECK_THROWS_AS(enumerate_interval_family(8, 9, 100000), TooLargeError);
}

TEST_CASE("binary tree family counts follow the Catalan numbers") {
    const auto fam = enumerate_tree_family(1, 5);
    std::map<std::size_t, std::size_t> by_leaves;
    for (const auto& t : fam) ++by_leaves[t.leaf_count()];
    const std::vector<std::size_t> expected{1, 1, 2, 5, 14, 42};
    REQUIRE(by_leaves.size() == expected.size());
    for (std::size_t leaves = 1; leaves <= expected.size(); ++leaves) {
        CHECK(by_leaves[leaves] == expected[leaves - 1]);
        // closed form (2j choose j)/(j+1) with j = leaves-1 must agree
        const double j = static_cast<double>(leaves - 1);
        CHECK(static_cast<double>(by_leaves[leaves]) ==
              doctest::Approx(binomial(2 * j, j) / (j + 1)));
    }
}

TEST_CASE("quadtree family leaf counts are 1 mod 3") {
    const auto fam = enumerate_tree_family(2, 3);
    std::map<std::size_t, std::size_t> by_leaves;
    for (const auto& t : fam) {
        CHECK((t.leaf_count() - 1) % 3 == 0);
        ++by_leaves[t.leaf_count()];
    }
    CHECK(by_leaves[1] == 1);
    CHECK(by_leaves[4] == 1);
    CHECK(by_leaves[7] == 4);
    CHECK(by_leaves[10] == 22);  // (12 choose 3)/10
}

TEST_CASE("max_splits zero gives only the root partition") {
    const auto fam = enumerate_tree_family(3, 0);
    REQUIRE(fam.size() == 1);
    CHECK(fam[0].leaf_count() == 1);
}

TEST_CASE("tree enumeration honours the cap") {
    CHECK_THROWS_AS(enumerate_tree_family(1, 12, 100), TooLargeError);
}

TEST_CASE("regular family spans the requested levels") {
    const auto fam = enumerate_regular_family(1, 4);
    REQUIRE(fam.size() == 4);
    for (std::size_t i = 0; i < fam.size(); ++i) CHECK(fam[i].size() == (std::size_t{2} << i));
}

TEST_CASE("vector families enumerate intervals and spikes") {
    const auto ints = enumerate_vector_interval_family(5, 2);
    // 1 + C(4,1) = 5 partitions
    CHECK(ints.size() == 5);
    for (const auto& m : ints) CHECK(m.is_interval_form());

    const auto spikes = enumerate_vector_spike_family(4, 2);
    // k=0: 1, k=1: 4, k=2: 6, all distinct for k <= n-2
    CHECK(spikes.size() == 11);
    for (const auto& m : spikes) CHECK(m.is_spike_form());
}
