#ifndef ERGOLAT_SERIALIZE_HPP
#define ERGOLAT_SERIALIZE_HPP

#include <complex>
#include <cstdio>
#include <string>

#include "ergolat/apscan.hpp"
#include "ergolat/bump.hpp"
#include "ergolat/dynamics.hpp"
#include "ergolat/means.hpp"
#include "ergolat/realization.hpp"
#include "ergolat/seq.hpp"

namespace ergolat {

/// One double with 17 significant digits — enough to round-trip any IEEE
/// binary64 value; the format used by every CSV emitter.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

// JSON adapters. Templated on the basic_json type so callers can pick the
// ordered flavour for byte-stable artifact files.

template <class J>
void to_json(J& j, const BumpSpec& b) {
    j = J{{"shape", "triangular"}, {"a", b.a}};
}

template <class J>
void to_json(J& j, const Realization& w) {
    j = J{{"seed", w.stream.seed()},
          {"q", w.stream.q()},
          {"offset", w.stream.offset()},
          {"delta", w.delta},
          {"bump", w.bump}};
}

namespace detail {

// std::complex lives outside this namespace, so it gets an explicit helper
// instead of an adl-visible adapter.
template <class J>
void assign_json_value(J& j, double v) {
    j = v;
}

template <class J>
void assign_json_value(J& j, const std::complex<double>& v) {
    j = J{{"re", v.real()}, {"im", v.imag()}};
}

} // namespace detail

template <class J, class T>
void to_json(J& j, const BasicMeanEstimate<T>& e) {
    J value;
    detail::assign_json_value(value, e.value);
    J partials = J::array();
    for (const auto& [Ri, vi] : e.partials) {
        J pv;
        detail::assign_json_value(pv, vi);
        partials.push_back(J{{"R", Ri}, {"value", pv}});
    }
    j = J{{"value", value}, {"R", e.R}, {"partials", partials}, {"stderr", e.stderr_}};
}

template <class J>
void to_json(J& j, const InvarianceReport& r) {
    j = J{{"z", r.z},
          {"n_samples", r.n_samples},
          {"freq_before", r.freq_before},
          {"freq_after", r.freq_after},
          {"exact_prob", r.exact_prob},
          {"chi2_pvalue", r.chi2_pvalue}};
}

template <class J>
void to_json(J& j, const SpectrumScan& s) {
    J rows = J::array();
    for (std::size_t i = 0; i < s.lambdas.size(); ++i)
        rows.push_back(J{{"lambda", s.lambdas[i]},
                         {"re", s.coefficients[i].real()},
                         {"im", s.coefficients[i].imag()},
                         {"abs", std::abs(s.coefficients[i])},
                         {"stderr", s.stderrs[i]}});
    j = J{{"R", s.R}, {"coefficients", rows}};
}

template <class J>
void to_json(J& j, const TrigPolynomial& p) {
    J rows = J::array();
    for (const auto& [lam, c] : p.terms)
        rows.push_back(J{{"lambda", lam}, {"re", c.real()}, {"im", c.imag()}});
    j = J{{"terms", rows}};
}

template <class J>
void to_json(J& j, const FnAlmostPeriodReport& r) {
    J rows = J::array();
    for (const auto& [p, sup] : r.candidates) rows.push_back(J{{"p", p}, {"sup_diff", sup}});
    j = J{{"eps", r.eps},
          {"window", J::array({r.window_lo, r.window_hi})},
          {"grid_step", r.grid_step},
          {"candidates", rows},
          {"accepted", r.accepted}};
    if (r.inclusion_length)
        j["inclusion_length"] = *r.inclusion_length;
    else
        j["inclusion_length"] = "none";
}

template <class J>
void to_json(J& j, const DecompositionEntry& e) {
    j = J{{"K", e.K},
          {"residual_l1", e.residual_l1},
          {"residual_b2", e.residual_b2},
          {"l1_stderr", e.l1_stderr},
          {"b2_stderr", e.b2_stderr}};
}

template <class J>
void to_json(J& j, const DecompositionReport& r) {
    j = J{{"q", r.q},
          {"bump_a", r.bump_a},
          {"R", r.R},
          {"curve", r.curve},
          {"ap_component", r.ap_component},
          {"residual_l1_mean", r.residual_l1_mean},
          {"residual_besicovitch", r.residual_besicovitch},
          {"predicted_l1", r.predicted_l1},
          {"predicted_b2", r.predicted_b2},
          {"tolerance", r.tolerance},
          {"pass", r.pass},
          {"note", r.note}};
}

template <class J>
void to_json(J& j, const NullityReport& r) {
    j = J{{"kind", to_string(r.kind)},
          {"n", r.n},
          {"window_len", r.window_len},
          {"q", r.q},
          {"detections", r.detections},
          {"union_bound_per_sample", r.union_bound_per_sample},
          {"expected_detections_bound", r.expected_detections_bound}};
}

} // namespace ergolat

#endif // ERGOLAT_SERIALIZE_HPP
