#ifndef ERGOLAT_DYNAMICS_HPP
#define ERGOLAT_DYNAMICS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>

#include "ergolat/means.hpp"
#include "ergolat/realization.hpp"
#include "ergolat/rng.hpp"
#include "ergolat/stats.hpp"

namespace ergolat {

/// Skew shift on the product space: S(z)(x, theta) = (tau_k x, frac) where
/// z + theta = k + frac. The integer part moves the sequence, the rest stays
/// on the circle.
inline ProductPoint s_apply(double z, const ProductPoint& p) {
    if (!std::isfinite(z)) throw std::invalid_argument("s_apply: z must be finite");
    const FloorDecomposition d = floor_decompose(z + p.theta);
    return ProductPoint{p.stream.shifted(d.integral), d.frac};
}

/// Time shift on realizations: t_apply(z, w)(t) = w(t + z). Only delta
/// changes; the canonical decomposition is deferred to evaluation time.
inline Realization t_apply(double z, const Realization& w) {
    if (!std::isfinite(z)) throw std::invalid_argument("t_apply: z must be finite");
    return Realization{w.stream, w.delta + z, w.bump};
}

/// A rectangle in the product space: finitely many pinned spins crossed with
/// a half-open theta interval.
struct CylinderEvent {
    std::map<std::int64_t, int> constraints; // site index -> required spin
    double theta_lo = 0.0;
    double theta_hi = 1.0;

    void validate() const {
        for (const auto& [m, spin] : constraints)
            if (spin != -1 && spin != 1)
                throw std::invalid_argument("CylinderEvent: spins must be -1 or +1");
        if (!(theta_lo >= 0.0 && theta_lo < theta_hi && theta_hi <= 1.0))
            throw std::invalid_argument("CylinderEvent: requires 0 <= lo < hi <= 1");
    }

    bool contains(const ProductPoint& p) const {
        if (!(p.theta >= theta_lo && p.theta < theta_hi)) return false;
        for (const auto& [m, spin] : constraints)
            if (p.stream.site(m) != spin) return false;
        return true;
    }
};

/// Product-measure probability of the event: (hi - lo) times q per pinned
/// -1 and (1-q) per pinned +1.
inline double cylinder_probability(const CylinderEvent& e, double q) {
    e.validate();
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("cylinder_probability: q must lie in [0,1]");
    double prob = e.theta_hi - e.theta_lo;
    for (const auto& [m, spin] : e.constraints) prob *= (spin == -1) ? q : 1.0 - q;
    return prob;
}

/// Outcome of one Monte-Carlo invariance check: empirical frequency of the
/// event over fresh product-measure samples, before and after applying the
/// shift, against the closed-form probability. chi2_pvalue is the joint
/// 2-dof tail probability of the two goodness-of-fit statistics.
struct InvarianceReport {
    double z = 0.0;
    std::int64_t n_samples = 0;
    double freq_before = 0.0;
    double freq_after = 0.0;
    double exact_prob = 0.0;
    double chi2_pvalue = 1.0;
};

/// Draw n independent points from the product measure (Bernoulli(q) spins x
/// uniform theta), count membership in e, and membership of the shifted
/// point in e. Under shift invariance both counts are Binomial(n, P(e)),
/// which the chi-square p-value quantifies. Fully determined by seed.
inline InvarianceReport measure_preservation_test(const CylinderEvent& e, double z, double q,
                                                  std::int64_t n, std::uint64_t seed) {
    e.validate();
    if (n < 1000)
        throw std::invalid_argument(
            "measure_preservation_test: insufficient samples (need n >= 1000)");
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("measure_preservation_test: q must lie in [0,1]");
    if (!std::isfinite(z))
        throw std::invalid_argument("measure_preservation_test: z must be finite");

    const RngKey master{seed};
    const RngKey seq_keys = master.sub(0x5eed5);
    const RngKey theta_keys = master.sub(0x7e7a5);

    std::int64_t hits_before = 0;
    std::int64_t hits_after = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        const SequenceStream x(seq_keys.raw(static_cast<std::uint64_t>(i)), q);
        const double theta = theta_keys.unit(static_cast<std::uint64_t>(i));
        const ProductPoint p{x, theta};
        if (e.contains(p)) ++hits_before;
        if (e.contains(s_apply(z, p))) ++hits_after;
    }

    InvarianceReport rep;
    rep.z = z;
    rep.n_samples = n;
    rep.freq_before = static_cast<double>(hits_before) / static_cast<double>(n);
    rep.freq_after = static_cast<double>(hits_after) / static_cast<double>(n);
    rep.exact_prob = cylinder_probability(e, q);
    const double chi2 =
        binomial_chi2(hits_before, n, rep.exact_prob) + binomial_chi2(hits_after, n, rep.exact_prob);
    rep.chi2_pvalue = std::isinf(chi2) ? 0.0 : chi2_survival(chi2, 2);
    return rep;
}

/// Observables on realizations, addressed by name so experiment configs can
/// refer to them. "eval0" is w(0); "abs0" and "square0" are |w(0)| and
/// w(0)^2; "const:<v>" is the constant v.
inline std::function<double(const Realization&)> lookup_observable(const std::string& name) {
    if (name == "eval0") return [](const Realization& w) { return realization_eval(w, 0.0); };
    if (name == "abs0")
        return [](const Realization& w) { return std::abs(realization_eval(w, 0.0)); };
    if (name == "square0") return [](const Realization& w) {
            const double v = realization_eval(w, 0.0);
            return v * v;
        };
    if (name.rfind("const:", 0) == 0) {
        const double c = std::stod(name.substr(6));
        return [c](const Realization&) { return c; };
    }
    throw std::invalid_argument("lookup_observable: unknown observable \"" + name + "\"");
}

/// Time average (1/2R) integral over [-R, R] of obs(T(t) w) along the orbit
/// of the point p, with the usual quadrature engine (partials + batch
/// stderr). For obs = "eval0" this is the ball average of the realization
/// itself.
inline MeanEstimate birkhoff_average(const std::string& obs, const ProductPoint& p, double R,
                                     const BumpSpec& bump = {}, double h = kDefaultGridStep) {
    const auto f = lookup_observable(obs);
    const Realization w = h_inverse(p, bump);
    auto orbit = [&f, &w](double t) { return f(t_apply(t, w)); };
    return window_average(orbit, R, 0.0, h);
}

} // namespace ergolat

#endif // ERGOLAT_DYNAMICS_HPP
