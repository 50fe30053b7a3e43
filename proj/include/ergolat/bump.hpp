#ifndef ERGOLAT_BUMP_HPP
#define ERGOLAT_BUMP_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace ergolat {

/// Split t = n + theta with n integral and theta in [0,1). Exact in floating
/// point: theta is computed as t - floor(t), and when that difference rounds
/// up to 1.0 (possible for tiny negative t) the pair is canonicalized to
/// (n + 1, 0.0) so the contract theta < 1 holds unconditionally.
struct FloorDecomposition {
    std::int64_t integral = 0;
    double frac = 0.0;
};

inline FloorDecomposition floor_decompose(double t) {
    if (!std::isfinite(t)) throw std::invalid_argument("floor_decompose: t must be finite");
    const double fl = std::floor(t);
    if (fl < -9.2e18 || fl > 9.2e18)
        throw std::invalid_argument("floor_decompose: |t| too large for a 64-bit integer part");
    FloorDecomposition d;
    d.integral = static_cast<std::int64_t>(fl);
    d.frac = t - fl;
    if (d.frac >= 1.0) { // rounding pushed t - floor(t) up to 1.0
        d.integral += 1;
        d.frac = 0.0;
    }
    return d;
}

/// The single bump shape used throughout: a symmetric triangle supported on
/// [-a, a] with peak value 1 at the origin. Kept as an enum so the carrier
/// struct stays an aggregate and serializes trivially.
enum class BumpShape { triangular };

/// Parameters of the bump: shape tag plus half-width a in (0, 1/2), the
/// range on which neighbouring integer translates have disjoint supports.
struct BumpSpec {
    BumpShape shape = BumpShape::triangular;
    double a = 0.25;

    void validate() const {
        if (shape != BumpShape::triangular)
            throw std::invalid_argument("BumpSpec: unknown bump shape");
        if (!(a > 0.0 && a < 0.5))
            throw std::invalid_argument("BumpSpec: half-width a must lie in (0, 1/2)");
    }

    friend bool operator==(const BumpSpec&, const BumpSpec&) = default;
};

/// Closed-form integral data for a bump, plus its Fourier transform as a
/// callable. The BumpSpec is carried along so `fourier` stays self-contained.
struct BumpMoments {
    double c1 = 0.0;        // integral of phi
    double c2 = 0.0;        // integral of phi^2
    double lipschitz = 0.0; // best Lipschitz constant, 1/a for the triangle
    BumpSpec spec;

    double fourier(double lambda) const;
};

/// phi(x) = max(0, 1 - |x|/a).
inline double bump_eval(const BumpSpec& spec, double x) {
    spec.validate();
    if (!std::isfinite(x)) throw std::invalid_argument("bump_eval: x must be finite");
    const double v = 1.0 - std::abs(x) / spec.a;
    return v > 0.0 ? v : 0.0;
}

/// Exact moments of the triangle: c1 = a, c2 = 2a/3, Lipschitz constant 1/a.
inline BumpMoments bump_moments(const BumpSpec& spec) {
    spec.validate();
    BumpMoments m;
    m.c1 = spec.a;
    m.c2 = 2.0 * spec.a / 3.0;
    m.lipschitz = 1.0 / spec.a;
    m.spec = spec;
    return m;
}

/// Fourier transform of the triangle, hat(phi)(lambda) = a sinc^2(lambda a/2)
/// with sinc(u) = sin(u)/u. Continuous through lambda = 0 where it equals a.
inline double bump_fourier(const BumpSpec& spec, double lambda) {
    spec.validate();
    if (!std::isfinite(lambda)) throw std::invalid_argument("bump_fourier: lambda must be finite");
    const double u = lambda * spec.a / 2.0;
    if (u == 0.0) return spec.a;
    const double s = std::sin(u) / u;
    return spec.a * s * s;
}

inline double BumpMoments::fourier(double lambda) const { return bump_fourier(spec, lambda); }

/// Uniform modulus of continuity shared by every lattice realization built
/// from this bump: beta(s) = min(1, L*s). For s <= 1-2a only one translate
/// can change between t and t+s, so the Lipschitz bound applies directly;
/// for 1-2a < s <= 1-a a straddling pair contributes at most L*(s-(1-2a)),
/// still under the cap. (Beyond s = 1-a two opposite peaks come within
/// range and differences approach 2; equicontinuity is a small-s notion and
/// every caller probes s well inside the valid range.)
inline double equicontinuity_modulus(const BumpSpec& spec, double s) {
    spec.validate();
    if (!(s >= 0.0)) throw std::invalid_argument("equicontinuity_modulus: requires s >= 0");
    const double b = s / spec.a; // L*s with L = 1/a
    return b < 1.0 ? b : 1.0;
}

} // namespace ergolat

#endif // ERGOLAT_BUMP_HPP
