#include <doctest.h>

#include <cmath>

#include "phe/enumerate.hpp"
#include "phe/selection.hpp"
#include "phe/serialization.hpp"
#include "support/random_partitions.hpp"

using namespace phe;

TEST_CASE("penalty floors per framework") {
    // density: (8 delta |m| + 202 w) / n
    auto dens = PenaltySpec::density(100);
    CHECK(penalty(4, 8.0, dens) == doctest::Approx(16.48));
    CHECK(dens.epsilon == doctest::Approx(0.01));

    auto poi = PenaltySpec::poisson();
    CHECK(penalty(1, 1.0, poi) == doctest::Approx(9.0));

    // vector with unit Bernstein constants coincides with the poisson form
    auto vec = PenaltySpec::vector_counts(1.0, 1.0);
    CHECK(vec.K_factor() == doctest::Approx(std::sqrt(2.0)));
    for (std::size_t cells = 1; cells < 6; ++cells)
        for (double w : {0.5, 1.0, 7.0})
            CHECK(penalty(cells, w, vec) == doctest::Approx(penalty(cells, w, poi)));

    // counting: 16 delta |m| (k + kappa') + 404 (k + gamma) w
    auto cnt = PenaltySpec::counting(1, 2.0, 1.0);
    CHECK(penalty(2, 1.0, cnt) == doctest::Approx(16.0 * 2 * 3 + 404.0 * 2));
}

TEST_CASE("heavier-tailed vector laws enlarge the K factor") {
    auto heavy = PenaltySpec::vector_counts(1.0, 4.0);
    CHECK(heavy.K_factor() == doctest::Approx(std::sqrt(2.0) / 2.0 + std::sqrt(3.5)));
    CHECK(heavy.min_c1() > PenaltySpec::vector_counts(1.0, 1.0).min_c1());
}

TEST_CASE("penalty overrides below the floor need the unsafe flag") {
    auto spec = PenaltySpec::density(100);
    spec.c1_override = 0.001;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.unsafe = true;
    CHECK_NOTHROW(spec.validate());
    spec.unsafe = false;
    spec.c1_override = spec.min_c1() * 2.0;  // upward is fine
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("deviation constants are exposed for reporting") {
    const auto abc = PenaltySpec::poisson().deviation_constants();
    CHECK(abc[0] == 1.0);
    CHECK(abc[1] == 6.0);
    CHECK(abc[2] == 3.0);
}

TEST_CASE("test statistic of a model against itself vanishes") {
    const auto obs = DensityObs::simulate(Intensity::constant(1.0), 200, 3);
    const auto m = IntervalPartition::regular(1);
    const auto spec = PenaltySpec::density(200);
    const auto ws = WeightScheme::interval_grid();
    CHECK(test_statistic(m, m, obs, spec, ws) == 0.0);
}

TEST_CASE("nested pair: statistic reduces to distance plus penalty gap") {
    const auto obs = DensityObs::simulate(Intensity::constant(1.0), 500, 5);
    const auto coarse = IntervalPartition::unit();
    const auto fine = IntervalPartition::regular(2);
    const auto spec = PenaltySpec::density(500);
    const auto ws = WeightScheme::interval_grid();

    const auto a = fit(coarse, obs);
    const auto b = fit(fine, obs);
    const double expected = hellinger_sq(a, b, obs) +
                            16.0 * (penalty(coarse.size(), ws.weight(coarse), spec) -
                                    penalty(fine.size(), ws.weight(fine), spec));
    CHECK(test_statistic(coarse, fine, obs, spec, ws) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("pairwise statistics are exactly antisymmetric") {
    Rng rng(21);
    const auto obs = DensityObs::simulate(Intensity::constant(1.0), 400, 9);
    const auto spec = PenaltySpec::density(400);
    const auto ws = WeightScheme::interval_grid();
    for (int rep = 0; rep < 30; ++rep) {
        const auto a = phe::testing::random_interval_partition(rng, 4, 0.3);
        const auto b = phe::testing::random_interval_partition(rng, 4, 0.3);
        if (a == b) continue;
        const double t1 = test_statistic(a, b, obs, spec, ws);
        const double t2 = test_statistic(b, a, obs, spec, ws);
        CHECK(t1 + t2 == 0.0);
    }
}

TEST_CASE("selection on a singleton family returns it with zero criterion") {
    const auto obs = DensityObs::simulate(Intensity::constant(1.0), 100, 2);
    std::vector<IntervalPartition> family{IntervalPartition::unit()};
    const auto res =
        select(family, obs, PenaltySpec::density(100), WeightScheme::interval_grid());
    CHECK(res.summary.selected == 0);
    CHECK(res.summary.criterion == std::vector<double>{0.0});
}

TEST_CASE("selection rejects an empty family") {
    const auto obs = DensityObs::simulate(Intensity::constant(1.0), 100, 2);
    std::vector<IntervalPartition> family;
    CHECK_THROWS_AS(
        select(family, obs, PenaltySpec::density(100), WeightScheme::interval_grid()),
        std::invalid_argument);
}

TEST_CASE("pair cap aborts oversized selections") {
    const auto obs = DensityObs::simulate(Intensity::constant(1.0), 50, 2);
    const auto family = enumerate_interval_family(3, 8);
    SelectOptions opts;
    opts.pair_cap = 10;
    CHECK_THROWS_AS(
        select(family, obs, PenaltySpec::density(50), WeightScheme::interval_grid(), opts),
        TooLargeError);
}

TEST_CASE("constant data prefers the trivial model") {
    std::vector<IntervalPartition> family{IntervalPartition::unit(),
                                          IntervalPartition::regular(1)};
    std::size_t trivial_wins = 0;
    const std::size_t reps = 200;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto obs = DensityObs::simulate(Intensity::constant(1.0), 2000, derive_seed(31, r));
        const auto res =
            select(family, obs, PenaltySpec::density(2000), WeightScheme::interval_grid());
        if (res.summary.selected == 0) ++trivial_wins;
    }
    CHECK(trivial_wins >= 180);  // 90 percent
}

TEST_CASE("selection report invariants") {
    Rng rng(55);
    const auto family = enumerate_interval_family(3, 4);
    const auto obs = DensityObs::simulate(
        Intensity::piecewise_constant({0, 0.5, 1}, {1.4, 0.6}), 800, 77);
    const auto spec = PenaltySpec::density(800);
    const auto res = select(family, obs, spec, WeightScheme::interval_grid());
    const auto& sum = res.summary;

    // antisymmetry of the retained matrix
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = 0; j < family.size(); ++j)
            CHECK(sum.tests[i][j] + sum.tests[j][i] == 0.0);

    // the selected model is within epsilon/3 of the smallest criterion
    CHECK(sum.criterion[sum.selected] <= sum.min_criterion + spec.epsilon / 3.0);

    // every model in the epsilon/3 class has a criterion within epsilon/3
    for (std::size_t m = 0; m < family.size(); ++m)
        if (sum.criterion[m] <= sum.min_criterion + spec.epsilon / 3.0)
            CHECK(std::abs(sum.criterion[m] - sum.min_criterion) <= spec.epsilon / 3.0);

    // rejection sets exclude the model itself and explain the criterion
    for (std::size_t m = 0; m < family.size(); ++m) {
        double worst = 0.0;
        for (auto r : sum.rejected[m]) {
            CHECK(r != m);
            worst = std::max(worst, sum.distances[m][r]);
        }
        CHECK(sum.criterion[m] == worst);
    }

    // distances to rejectors of the winner never exceed its criterion
    for (auto r : sum.rejected[sum.selected])
        CHECK(sum.distances[sum.selected][r] <= sum.criterion[sum.selected]);
}

TEST_CASE("widening a nested penalty gap weakly shrinks rejection") {
    const auto obs = DensityObs::simulate(Intensity::constant(1.0), 300, 123);
    const auto coarse = IntervalPartition::unit();
    const auto fine = IntervalPartition::regular(1);
    const auto ws = WeightScheme::interval_grid();

    auto spec = PenaltySpec::density(300);
    const double t_base = test_statistic(fine, coarse, obs, spec, ws);
    auto wider = spec;
    wider.c2_override = spec.min_c2() * 3.0;
    const double t_wide = test_statistic(fine, coarse, obs, wider, ws);
    // the fine model's statistic against the coarse one grows with the gap,
    // so the indicator {T(coarse, fine) > 0} can only shrink
    CHECK(t_wide >= t_base);
}

TEST_CASE("selection reports are identical across worker counts") {
    const auto family = enumerate_interval_family(3, 5);
    const auto obs = DensityObs::simulate(
        Intensity::piecewise_constant({0, 0.25, 1}, {2.0, 2.0 / 3.0}), 600, 4242);
    const auto spec = PenaltySpec::density(600);
    const auto ws = WeightScheme::interval_grid();

    SelectOptions one;
    one.workers = 1;
    SelectOptions eight;
    eight.workers = 8;
    const auto ra = select(family, obs, spec, ws, one);
    const auto rb = select(family, obs, spec, ws, eight);
    CHECK(to_json(ra.summary).dump() == to_json(rb.summary).dump());
    CHECK(ra.estimate.levels == rb.estimate.levels);
}

TEST_CASE("randomized tie-breaking only fires on exact ties") {
    // two distinct models with equal penalties and identical fits tie at
    // T == 0 when the data are flat
    std::vector<VectorPartition> family{VectorPartition::spikes(3, {0}),
                                        VectorPartition::spikes(3, {2})};
    const auto obs = VectorObs::from_values({3.0, 3.0, 3.0});
    auto spec = PenaltySpec::vector_counts();
    const auto ws = WeightScheme::vector_spikes(3);

    SelectOptions det;
    const auto rd = select(family, obs, spec, ws, det);
    CHECK(rd.summary.rejected[0].empty());
    CHECK(rd.summary.rejected[1].empty());

    SelectOptions rnd;
    rnd.randomize_ties = true;
    rnd.tie_seed = 9;
    const auto rr = select(family, obs, spec, ws, rnd);
    CHECK(rr.summary.rejected[0].size() + rr.summary.rejected[1].size() == 1);
}
