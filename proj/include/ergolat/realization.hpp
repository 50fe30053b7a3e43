#ifndef ERGOLAT_REALIZATION_HPP
#define ERGOLAT_REALIZATION_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "ergolat/bump.hpp"
#include "ergolat/seq.hpp"

namespace ergolat {

/// A point of the product space: a spin sequence together with a fractional
/// offset theta in [0,1). This is the canonical coordinate system for the
/// space of lattice realizations.
struct ProductPoint {
    SequenceStream stream;
    double theta = 0.0;

    ProductPoint(SequenceStream s, double th) : stream(std::move(s)), theta(th) {
        if (!(th >= 0.0 && th < 1.0))
            throw std::invalid_argument("ProductPoint: theta must lie in [0,1)");
    }

    friend bool operator==(const ProductPoint&, const ProductPoint&) = default;
};

/// The function t -> sum_m x_m phi(t + delta - m): a random +-1 lattice sum
/// of the bump, translated by delta. Since the bump supports are disjoint,
/// at most one summand is ever alive, which is what makes exact O(1)
/// evaluation possible.
struct Realization {
    SequenceStream stream;
    double delta = 0.0;
    BumpSpec bump;

    Realization(SequenceStream s, double d, BumpSpec b = {})
        : stream(std::move(s)), delta(d), bump(b) {
        if (!std::isfinite(d)) throw std::invalid_argument("Realization: delta must be finite");
        bump.validate();
    }

    double operator()(double t) const;
};

/// Canonical coordinates of a realization: (tau_floor(delta) x, frac(delta)).
/// Two realizations that are equal as functions have the same image, so this
/// map decides function equality.
inline ProductPoint h_forward(const Realization& w) {
    const FloorDecomposition d = floor_decompose(w.delta);
    return ProductPoint{w.stream.shifted(d.integral), d.frac};
}

/// Inverse of h_forward: rebuild the realization with delta = theta. The
/// bump is ambient data not carried by the product point, so it is supplied
/// here (defaulted to the standard triangle).
inline Realization h_inverse(const ProductPoint& p, const BumpSpec& bump = {}) {
    return Realization{p.stream, p.theta, bump};
}

/// Value of the lattice sum at t. Internally works in canonical coordinates
/// — the integer part of delta moves into the sequence index and only theta
/// enters the floating-point evaluation — so a realization and its canonical
/// form produce bit-identical values at every t.
inline double realization_eval(const Realization& w, double t) {
    if (!std::isfinite(t)) throw std::invalid_argument("realization_eval: t must be finite");
    const FloorDecomposition d = floor_decompose(w.delta);
    const double u = t + d.frac;
    const double nearest = std::round(u);
    if (nearest < -9.2e18 || nearest > 9.2e18)
        throw std::invalid_argument("realization_eval: |t| too large to address a lattice site");
    const double dist = u - nearest; // exact: |dist| <= 1/2 (Sterbenz)
    const double phi = bump_eval(w.bump, dist);
    if (phi == 0.0) return 0.0; // outside every support; skip site lookup
    std::int64_t m = static_cast<std::int64_t>(nearest);
    if (__builtin_add_overflow(m, d.integral, &m))
        throw std::invalid_argument("realization_eval: lattice site index overflows");
    return static_cast<double>(w.stream.site(m)) * phi;
}

inline double Realization::operator()(double t) const { return realization_eval(*this, t); }

/// Function equality by canonical form.
inline bool equal_as_functions(const Realization& lhs, const Realization& rhs) {
    return lhs.bump == rhs.bump && h_forward(lhs) == h_forward(rhs);
}

} // namespace ergolat

#endif // ERGOLAT_REALIZATION_HPP
