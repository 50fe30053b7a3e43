#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <limits>

#include "ergolat/dynamics.hpp"
#include "ergolat/rng.hpp"

using namespace ergolat;

TEST_CASE("s_apply moves the integer part into the sequence") {
    const SequenceStream x(17, 0.5);

    // Identity shift.
    const ProductPoint p{x, 0.75};
    const ProductPoint same = s_apply(0.0, p);
    CHECK(same == p);

    // Carry across the circle: 0.5 + 0.75 = 1.25.
    const ProductPoint q = s_apply(0.5, p);
    CHECK(q.stream == x.shifted(1));
    CHECK(q.theta == 0.25);

    CHECK_THROWS_AS(s_apply(std::numeric_limits<double>::infinity(), p), std::invalid_argument);
}

TEST_CASE("s_apply composes as a one-parameter group") {
    const RngKey key{7001};
    int boundary_skips = 0;
    for (std::uint64_t i = 0; i < 10000; ++i) {
        const double z1 = (key.unit(4 * i) - 0.5) * 40.0;
        const double z2 = (key.unit(4 * i + 1) - 0.5) * 40.0;
        const ProductPoint p{SequenceStream(key.raw(4 * i + 2), 0.5), key.unit(4 * i + 3)};

        const ProductPoint two_step = s_apply(z2, s_apply(z1, p));
        const ProductPoint one_step = s_apply(z1 + z2, p);

        if (two_step.stream.offset() != one_step.stream.offset()) {
            // A float-rounding boundary crossing can shift theta by a full
            // turn; it must be vanishingly rare with continuous draws.
            ++boundary_skips;
            continue;
        }
        CHECK(two_step.stream == one_step.stream);
        CHECK(two_step.theta == Catch::Approx(one_step.theta).margin(1e-12));
    }
    CHECK(boundary_skips == 0);

    // Inverse: S(-z) undoes S(z).
    for (std::uint64_t i = 0; i < 2000; ++i) {
        const double z = (key.sub(1).unit(2 * i) - 0.5) * 40.0;
        const ProductPoint p{SequenceStream(key.sub(1).raw(2 * i + 1), 0.5), 0.375};
        const ProductPoint back = s_apply(-z, s_apply(z, p));
        CHECK(back.stream == p.stream);
        CHECK(back.theta == Catch::Approx(p.theta).margin(1e-12));
    }
}

TEST_CASE("t_apply shifts evaluation") {
    const SequenceStream x(23, 0.5);
    const Realization w{x, 0.25};

    const Realization moved = t_apply(1.5, w);
    CHECK(moved.delta == 1.75);
    CHECK(realization_eval(moved, 0.0) == realization_eval(w, 1.5));

    // t_apply(z, w)(t) = w(t + z) wherever t + z is exact.
    const RngKey key{7002};
    for (std::uint64_t i = 0; i < 3000; ++i) {
        const double z = (static_cast<double>(key.raw(3 * i) % 2561) - 1280.0) / 64.0;
        const double t = (static_cast<double>(key.raw(3 * i + 1) % 5121) - 2560.0) / 64.0;
        const Realization v{SequenceStream(key.raw(3 * i + 2), 0.5),
                            (static_cast<double>(key.raw(3 * i) % 641) - 320.0) / 64.0};
        CHECK(realization_eval(t_apply(z, v), t) == realization_eval(v, t + z));
    }
}

TEST_CASE("the product map is conjugate to the time shift") {
    // h_forward(t_apply(z, w)) = s_apply(z, h_forward(w)): sequence part
    // exact, circle part to 1e-12.
    const RngKey key{7003};
    for (std::uint64_t i = 0; i < 10000; ++i) {
        const double z = (key.unit(3 * i) - 0.5) * 40.0;
        const double delta = (key.unit(3 * i + 1) - 0.5) * 20.0;
        const Realization w{SequenceStream(key.raw(3 * i + 2), 0.3), delta};

        const ProductPoint via_function = h_forward(t_apply(z, w));
        const ProductPoint via_product = s_apply(z, h_forward(w));
        CHECK(via_function.stream == via_product.stream);
        CHECK(via_function.theta == Catch::Approx(via_product.theta).margin(1e-12));
    }
}

TEST_CASE("cylinder_probability closed form") {
    CHECK(cylinder_probability(CylinderEvent{}, 0.3) == 1.0);
    CHECK(cylinder_probability(CylinderEvent{{{0, -1}}, 0.0, 0.5}, 0.3) ==
          Catch::Approx(0.15).epsilon(1e-15));
    CHECK(cylinder_probability(CylinderEvent{{{0, -1}, {3, 1}}, 0.0, 1.0}, 0.3) ==
          Catch::Approx(0.21).epsilon(1e-15));

    CHECK_THROWS_AS(cylinder_probability(CylinderEvent{{{0, 2}}, 0.0, 1.0}, 0.3),
                    std::invalid_argument);
    CHECK_THROWS_AS(cylinder_probability(CylinderEvent{{}, 0.5, 0.5}, 0.3),
                    std::invalid_argument);
    CHECK_THROWS_AS(cylinder_probability(CylinderEvent{{}, 0.0, 1.5}, 0.3),
                    std::invalid_argument);
    CHECK_THROWS_AS(cylinder_probability(CylinderEvent{}, 1.5), std::invalid_argument);
}

TEST_CASE("measure_preservation_test basics") {
    const CylinderEvent e{{{0, -1}}, 0.0, 0.5};

    // Identity shift: the two frequencies are literally the same count.
    const InvarianceReport id = measure_preservation_test(e, 0.0, 0.3, 2000, 11);
    CHECK(id.freq_before == id.freq_after);
    CHECK(id.exact_prob == Catch::Approx(0.15).epsilon(1e-15));

    // Full space: everything is a hit, before and after.
    const InvarianceReport full = measure_preservation_test(CylinderEvent{}, 3.7, 0.3, 2000, 12);
    CHECK(full.freq_before == 1.0);
    CHECK(full.freq_after == 1.0);
    CHECK(full.chi2_pvalue == 1.0);

    CHECK_THROWS_AS(measure_preservation_test(e, 1.0, 0.3, 10, 13), std::invalid_argument);
}

TEST_CASE("shifts preserve cylinder measure empirically") {
    const CylinderEvent e{{{0, -1}}, 0.0, 0.5};
    for (double z : {3.7, -1.2, 0.25}) {
        const InvarianceReport rep = measure_preservation_test(e, z, 0.3, 20000, 4242);
        CHECK(rep.chi2_pvalue > 1e-3);
        // 4-sigma binomial band at n = 20000: 4*sqrt(.15*.85/20000) ~ 0.010.
        CHECK(rep.freq_before == Catch::Approx(rep.exact_prob).margin(0.011));
        CHECK(rep.freq_after == Catch::Approx(rep.exact_prob).margin(0.011));
        CHECK(rep.n_samples == 20000);
    }
}

TEST_CASE("birkhoff_average of named observables") {
    const ProductPoint p{SequenceStream(31, 0.5), 0.125};

    // Constants integrate to themselves exactly (dyadic value, dyadic grid).
    const MeanEstimate c = birkhoff_average("const:2.5", p, 100.0);
    CHECK(c.value == 2.5);
    CHECK(c.partials.size() == 3);
    CHECK(c.partials.front().first == 25.0);
    CHECK(c.partials.back().second == c.value);

    // Orbit average of evaluation-at-zero is the ball average of the
    // realization; at q = 1/2 it hovers near zero.
    const MeanEstimate m = birkhoff_average("eval0", p, 2000.0);
    CHECK(std::abs(m.value) < 0.05);
    CHECK(m.stderr_ > 0.0);

    // abs0 hovers near the mean of |w|, which is c1 = 1/4 at q = 1/2.
    const MeanEstimate ab = birkhoff_average("abs0", p, 2000.0);
    CHECK(ab.value == Catch::Approx(0.25).margin(0.02));

    CHECK_THROWS_AS(birkhoff_average("no_such_observable", p, 100.0), std::invalid_argument);
    CHECK_THROWS_AS(birkhoff_average("eval0", p, -1.0), std::invalid_argument);
}

TEST_CASE("time average matches space average across start points") {
    // Ten independent starting points, q = 0.3: every orbit average lands
    // near (1-2q) c1 = 0.1 within a CLT-sized band.
    const RngKey key{7777};
    for (std::uint64_t i = 0; i < 10; ++i) {
        const ProductPoint p{SequenceStream(key.raw(2 * i), 0.3), key.unit(2 * i + 1)};
        const MeanEstimate m = birkhoff_average("eval0", p, 2000.0);
        CHECK(m.value == Catch::Approx(0.1).margin(3.0 * m.stderr_ + 0.005));
    }
}
