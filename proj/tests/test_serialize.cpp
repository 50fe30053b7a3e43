#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>

#include <json.hpp>

#include "ergolat/ergolat.hpp"

using namespace ergolat;
using nlohmann::json;

TEST_CASE("seventeen-digit formatting round-trips doubles exactly") {
    for (double v : {0.1, 1.0 / 3.0, 1e300, 2.2250738585072014e-308, 4.9e-324,
                     std::numbers::pi, -123456.789, 0.0}) {
        const std::string s = format_g17(v);
        const double back = std::strtod(s.c_str(), nullptr);
        CHECK(back == v);
    }
    const std::string neg_zero = format_g17(-0.0);
    const double back = std::strtod(neg_zero.c_str(), nullptr);
    CHECK(back == 0.0);
    CHECK(std::signbit(back));
}

TEST_CASE("mean estimates serialize with their convergence trail") {
    MeanEstimate e;
    e.value = 0.25;
    e.R = 1000.0;
    e.partials = {{250.0, 0.24}, {500.0, 0.26}, {1000.0, 0.25}};
    e.stderr_ = 0.003;
    const json j = e;
    CHECK(j["value"] == 0.25);
    CHECK(j["R"] == 1000.0);
    CHECK(j["stderr"] == 0.003);
    REQUIRE(j["partials"].size() == 3);
    CHECK(j["partials"][0]["R"] == 250.0);
    CHECK(j["partials"][0]["value"] == 0.24);

    ComplexMeanEstimate c;
    c.value = {0.5, -0.125};
    c.R = 500.0;
    c.partials = {{500.0, {0.5, -0.125}}};
    const json jc = c;
    CHECK(jc["value"]["re"] == 0.5);
    CHECK(jc["value"]["im"] == -0.125);
    CHECK(jc["partials"][0]["value"]["im"] == -0.125);
}

TEST_CASE("almost-period reports spell out an empty inclusion length") {
    FnAlmostPeriodReport rep;
    rep.eps = 0.5;
    rep.window_lo = 0.0;
    rep.window_hi = 64.0;
    rep.grid_step = 0.03125;
    rep.candidates = {{1.0, 2.0}, {2.0, 2.0}};
    const json j = rep;
    CHECK(j["inclusion_length"] == "none");
    CHECK(j["window"] == json::array({0.0, 64.0}));
    CHECK(j["candidates"][1]["sup_diff"] == 2.0);
    CHECK(j["accepted"].empty());

    rep.accepted = {3.0, 6.0};
    rep.inclusion_length = 3.0;
    const json j2 = rep;
    CHECK(j2["inclusion_length"] == 3.0);
}

TEST_CASE("decomposition reports carry curve, component, and verdict") {
    DecompositionReport rep = wstar_membership_experiment(11, 0.3, {1, 2}, 200.0);
    const json j = rep;
    for (const char* key :
         {"q", "bump_a", "R", "curve", "ap_component", "residual_l1_mean",
          "residual_besicovitch", "predicted_l1", "predicted_b2", "tolerance", "pass", "note"})
        CHECK(j.contains(key));
    REQUIRE(j["curve"].size() == 2);
    CHECK(j["curve"][0]["K"] == 1);
    CHECK(j["curve"][1]["K"] == 2);
    CHECK(j["curve"][0].contains("residual_l1"));
    CHECK(j["curve"][0].contains("b2_stderr"));
    // Terms of the projection are (lambda, re, im) rows, lambda ascending.
    REQUIRE(j["ap_component"]["terms"].size() == 5);
    CHECK(j["ap_component"]["terms"][0]["lambda"].get<double>() < 0.0);
    CHECK(j["pass"].is_boolean());
}

TEST_CASE("nullity reports name their detection kind") {
    NullityReport rep;
    rep.kind = NullityKind::periodic;
    rep.n = 1000;
    rep.window_len = 64;
    rep.detections = 0;
    const json jp = rep;
    CHECK(jp["kind"] == "periodic");
    rep.kind = NullityKind::almost_periodic;
    const json ja = rep;
    CHECK(ja["kind"] == "almost_periodic");
    CHECK(ja["n"] == 1000);
    CHECK(ja["window_len"] == 64);
}

TEST_CASE("realizations serialize their full construction data") {
    const Realization w{SequenceStream(42, 0.3).shifted(5), -1.25};
    const json j = w;
    CHECK(j["seed"] == 42);
    CHECK(j["q"] == 0.3);
    CHECK(j["offset"] == 5);
    CHECK(j["delta"] == -1.25);
    CHECK(j["bump"]["shape"] == "triangular");
    CHECK(j["bump"]["a"] == 0.25);
}

TEST_CASE("invariance and spectrum serializers keep every field") {
    InvarianceReport r;
    r.z = 3.7;
    r.n_samples = 1000;
    r.freq_before = 0.12;
    r.freq_after = 0.13;
    r.exact_prob = 0.125;
    r.chi2_pvalue = 0.4;
    const json j = r;
    for (const char* key :
         {"z", "n_samples", "freq_before", "freq_after", "exact_prob", "chi2_pvalue"})
        CHECK(j.contains(key));

    SpectrumScan s;
    s.R = 100.0;
    s.lambdas = {0.0, 6.283185307179586};
    s.coefficients = {{0.1, 0.0}, {0.02, -0.01}};
    s.stderrs = {0.001, 0.002};
    const json js = s;
    CHECK(js["R"] == 100.0);
    REQUIRE(js["coefficients"].size() == 2);
    CHECK(js["coefficients"][1]["im"] == -0.01);
    CHECK(js["coefficients"][1]["abs"] ==
          Catch::Approx(std::abs(std::complex<double>(0.02, -0.01))));
}
