#include <doctest.h>

#include <fstream>
#include <sstream>

#include "phe/enumerate.hpp"
#include "phe/serialization.hpp"
#include "support/random_partitions.hpp"

using namespace phe;

#ifndef PHE_TEST_DIR
#define PHE_TEST_DIR "."
#endif

namespace {

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("interval partition json round trip") {
    Rng rng(3);
    for (int rep = 0; rep < 50; ++rep) {
        const auto m = phe::testing::random_interval_partition(rng, 8, 0.1);
        const auto j = to_json(m);
        CHECK(interval_partition_from_json(j) == m);
    }
}

TEST_CASE("cube partition json round trip") {
    Rng rng(4);
    for (int rep = 0; rep < 30; ++rep) {
        const auto m = phe::testing::random_cube_partition(rng, 2, 2, 4);
        CHECK(cube_partition_from_json(to_json(m)) == m);
    }
}

TEST_CASE("vector partition json round trip") {
    const auto a = VectorPartition::intervals(12, {3, 9});
    CHECK(vector_partition_from_json(to_json(a)) == a);
    const auto b = VectorPartition::spikes(9, {1, 4, 7});
    CHECK(vector_partition_from_json(to_json(b)) == b);
}

TEST_CASE("tree partition json round trip") {
    for (const auto& t : enumerate_tree_family(1, 4))
        CHECK(tree_partition_from_json(to_json(t)) == t);
    for (const auto& t : enumerate_tree_family(2, 2))
        CHECK(tree_partition_from_json(to_json(t)) == t);
}

TEST_CASE("histogram json round trip") {
    const auto obs = DensityObs::simulate(Intensity::constant(1.0), 500, 21);
    const auto h = fit(IntervalPartition::regular(3), obs);
    const auto back = interval_histogram_from_json(to_json(h));
    CHECK(back.partition == h.partition);
    CHECK(back.levels == h.levels);
}

TEST_CASE("partition serialization matches the golden files") {
    const IntervalPartition m(
        {DyadicPoint::zero(), DyadicPoint(1, 2), DyadicPoint(1, 1), DyadicPoint::one()});
    CHECK(to_json(m).dump(2) + "\n" ==
          read_file(std::string(PHE_TEST_DIR) + "/golden/interval_partition.json"));

    const auto spike = CubePartition::spike(2, 0, {DyadicCube(2, {1, 1})});
    CHECK(to_json(spike).dump(2) + "\n" ==
          read_file(std::string(PHE_TEST_DIR) + "/golden/cube_partition.json"));

    const TreePartition t(1, {1, 1, 0, 0, 0});
    CHECK(to_json(t).dump(2) + "\n" ==
          read_file(std::string(PHE_TEST_DIR) + "/golden/tree_partition.json"));

    const auto v = VectorPartition::spikes(6, {2});
    CHECK(to_json(v).dump(2) + "\n" ==
          read_file(std::string(PHE_TEST_DIR) + "/golden/vector_partition.json"));
}

TEST_CASE("step csv duplicates edges for staircase plotting") {
    Histogram<IntervalPartition> h{IntervalPartition::regular(1), {2.0, 0.5}, {}};
    h.refresh_sqrt();
    CHECK(step_csv(h) == "x,y\n0,2\n0.5,2\n0.5,0.5\n1,0.5\n");
}

TEST_CASE("selection summary serialization is wall-clock free") {
    const auto family = enumerate_interval_family(2, 2);
    const auto obs = DensityObs::simulate(Intensity::constant(1.0), 200, 2);
    auto res = select(family, obs, PenaltySpec::density(200), WeightScheme::interval_grid());
    res.summary.wall_ms = 1234.5;
    const auto j = to_json(res.summary);
    CHECK(!j.contains("wall_ms"));
    CHECK(j.at("selected").get<std::size_t>() == res.summary.selected);
}

TEST_CASE("format_double renders shortest round trips") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.1) == "0.1");
}
