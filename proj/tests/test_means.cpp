#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

#include "ergolat/means.hpp"
#include "ergolat/realization.hpp"
#include "ergolat/rng.hpp"

using namespace ergolat;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("mean_value of a dyadic constant is exact") {
    auto f = [](double) { return 3.5; };
    const MeanEstimate m = mean_value(f, 10000.0);
    CHECK(m.value == 3.5);
    CHECK(m.R == 10000.0);
    CHECK(m.stderr_ == 0.0);
    REQUIRE(m.partials.size() == 3);
    CHECK(m.partials[0].first == 2500.0);
    CHECK(m.partials[1].first == 5000.0);
    CHECK(m.partials[2].first == 10000.0);
    for (const auto& [Ri, vi] : m.partials) CHECK(vi == 3.5);
}

TEST_CASE("mean_value of sin matches the exact antiderivative") {
    auto f = [](double t) { return std::sin(t); };
    const double R = 10000.0;

    // Centred window: the integral vanishes by symmetry.
    const MeanEstimate sym = mean_value(f, R);
    CHECK(std::abs(sym.value) < 1e-4);
    CHECK(std::abs(sym.value) < 2.0 / R);

    // Off-centre window: (cos(x0-R) - cos(x0+R)) / 2R, plus O(h^2) quadrature.
    const double x0 = 3.0;
    const MeanEstimate off = mean_value(f, R, x0);
    const double exact = (std::cos(x0 - R) - std::cos(x0 + R)) / (2.0 * R);
    CHECK(off.value == Catch::Approx(exact).margin(1e-4));

    CHECK_THROWS_AS(mean_value(f, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(mean_value(f, -5.0), std::invalid_argument);
}

TEST_CASE("mean_value is translation invariant up to boundary terms") {
    const Realization w{SequenceStream(41, 0.3), 0.0};
    const double R = 500.0;
    const double base = mean_value(w, R).value;
    for (double s : {2.0, 8.0, 32.0}) {
        const double moved = mean_value(w, R, s).value;
        // Shifting the window center by s changes the average by at most
        // 2 sup|f| s / (2R) on each side.
        CHECK(std::abs(moved - base) <= 2.0 * 1.0 * s / R);
    }
}

TEST_CASE("besicovitch seminorm: constants, sin, and homogeneity") {
    auto c = [](double) { return -2.0; };
    CHECK(besicovitch_seminorm2(c, 1000.0).value == 2.0);

    // [sin]_2 = 1/sqrt(2).
    auto f = [](double t) { return std::sin(t); };
    const MeanEstimate s = besicovitch_seminorm2(f, 10000.0);
    CHECK(s.value == Catch::Approx(1.0 / std::sqrt(2.0)).margin(0.001));

    // Power-of-two scalings commute exactly through squares, sums, and the
    // final square root, so homogeneity holds bit for bit.
    const Realization w{SequenceStream(5, 0.3), 0.0};
    auto scaled = [&w](double t) { return 4.0 * realization_eval(w, t); };
    const double bw = besicovitch_seminorm2(w, 2000.0).value;
    const double bs = besicovitch_seminorm2(scaled, 2000.0).value;
    CHECK(bs == 4.0 * bw);
}

TEST_CASE("quadratic mean dominates the absolute mean") {
    // Cauchy-Schwarz on estimates: M(|f|) <= [f]_2 up to estimator noise.
    const RngKey key{808};
    for (std::uint64_t i = 0; i < 5; ++i) {
        const Realization w{SequenceStream(key.raw(i), 0.3), 0.0};
        auto abs_w = [&w](double t) { return std::abs(realization_eval(w, t)); };
        const MeanEstimate l1 = mean_value(abs_w, 2000.0);
        const MeanEstimate b2 = besicovitch_seminorm2(w, 2000.0);
        CHECK(l1.value <= b2.value + 3.0 * (l1.stderr_ + b2.stderr_));
    }
}

TEST_CASE("partial estimates converge at the CLT rate") {
    const Realization w{SequenceStream(19, 0.5), 0.0};
    const MeanEstimate m = mean_value(w, 10000.0);
    REQUIRE(m.partials.size() == 3);
    for (std::size_t i = 1; i < m.partials.size(); ++i) {
        CHECK(m.partials[i].first > m.partials[i - 1].first);
        // Successive partials differ by O(R^{-1/2}); allow five sigmas of
        // the batch dispersion at the smaller radius (~2x the final one).
        const double slack = 5.0 * (2.0 * m.stderr_ + 1e-3);
        CHECK(std::abs(m.partials[i].second - m.partials[i - 1].second) <= slack);
    }
}

TEST_CASE("bohr_coefficient at lambda 0 is the mean") {
    const Realization w{SequenceStream(29, 0.3), 0.5};
    const ComplexMeanEstimate z = bohr_coefficient(w, 0.0, 2000.0);
    const MeanEstimate m = mean_value(w, 2000.0);
    CHECK(z.value.real() == m.value);
    CHECK(z.value.imag() == 0.0);
}

TEST_CASE("bohr_coefficient of a pure tone finds its amplitude") {
    // f(t) = cos(w0 t): a(w0) = 1/2, a at distant frequencies ~ 0.
    const double w0 = 2.0 * pi;
    auto f = [w0](double t) { return std::cos(w0 * t); };
    const double R = 1000.0;

    const ComplexMeanEstimate peak = bohr_coefficient(f, w0, R);
    CHECK(peak.value.real() == Catch::Approx(0.5).margin(0.005));
    CHECK(std::abs(peak.value.imag()) < 0.005);

    const ComplexMeanEstimate off = bohr_coefficient(f, std::sqrt(2.0), R);
    CHECK(std::abs(off.value) < 0.01);

    // Conjugate symmetry of coefficients of real signals is exact: the
    // cosine grid is even and the sine grid odd, term by term.
    const ComplexMeanEstimate neg = bohr_coefficient(f, -w0, R);
    CHECK(neg.value == std::conj(peak.value));
}

TEST_CASE("coefficient magnitudes never exceed the sup norm") {
    const Realization w{SequenceStream(59, 0.3), 0.25};
    for (double lam : {0.0, 1.0, 2.0 * pi, 4.0 * pi, std::sqrt(3.0)}) {
        const ComplexMeanEstimate z = bohr_coefficient(w, lam, 500.0);
        CHECK(std::abs(z.value) <= 1.0 + 1e-12);
    }
}

TEST_CASE("grid refinement keeps fast phases resolved") {
    // At lambda h > 1/2 the step is halved until the phase advance per step
    // is small; the estimate must stay accurate for fast tones.
    const double w0 = 16.0 * pi; // lambda h = 1.57 at the default step
    auto f = [w0](double t) { return std::cos(w0 * t); };
    const ComplexMeanEstimate peak = bohr_coefficient(f, w0, 500.0);
    CHECK(peak.value.real() == Catch::Approx(0.5).margin(0.005));
}

TEST_CASE("spectrum_scan equals per-frequency calls") {
    const Realization w{SequenceStream(61, 0.3), 0.0};
    const std::vector<double> lambdas{0.0, 2.0 * pi, -2.0 * pi, std::sqrt(2.0), 4.0 * pi};
    const SpectrumScan scan = spectrum_scan(w, lambdas, 500.0);
    REQUIRE(scan.lambdas.size() == lambdas.size());
    REQUIRE(scan.coefficients.size() == lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const ComplexMeanEstimate solo = bohr_coefficient(w, lambdas[i], 500.0);
        CHECK(scan.coefficients[i] == solo.value);
        CHECK(scan.stderrs[i] == solo.stderr_);
    }
    CHECK_THROWS_AS(spectrum_scan(w, {}, 500.0), std::invalid_argument);
}

TEST_CASE("lattice harmonics at fair q stay silent") {
    const Realization w{SequenceStream(67, 0.5), 0.0};
    std::vector<double> lambdas;
    for (int k = -4; k <= 4; ++k) lambdas.push_back(2.0 * pi * k);
    const SpectrumScan scan = spectrum_scan(w, lambdas, 10000.0);
    for (const auto& c : scan.coefficients) CHECK(std::abs(c) < 0.01);
}
