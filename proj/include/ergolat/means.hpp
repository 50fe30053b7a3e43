#ifndef ERGOLAT_MEANS_HPP
#define ERGOLAT_MEANS_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <future>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "ergolat/stats.hpp"

namespace ergolat {

/// Default quadrature step. One eighth of the default bump half-width, so a
/// piecewise-linear trace resolves every kink of the integrand comfortably.
inline constexpr double kDefaultGridStep = 1.0 / 32.0;

/// Ball-average estimate: the value, the radius used, partial estimates on
/// the doubling schedule R/4, R/2, R (convergence diagnostics), and a
/// batch-means dispersion estimate. T is double, or complex for coefficient
/// estimates.
template <class T>
struct BasicMeanEstimate {
    T value{};
    double R = 0.0;
    std::vector<std::pair<double, T>> partials; // (R_i, value at R_i), increasing
    double stderr_ = 0.0;
};

using MeanEstimate = BasicMeanEstimate<double>;
using ComplexMeanEstimate = BasicMeanEstimate<std::complex<double>>;

namespace detail {

inline double abs_sq(double v) noexcept { return v * v; }
inline double abs_sq(const std::complex<double>& v) noexcept { return std::norm(v); }

/// Quadrature grid over [x0-R, x0+R]: n subintervals of width h_eff, with n
/// a multiple of 16 so the 16 equal batches tile the window and the quarter
/// and half sub-windows start and end exactly on batch boundaries.
struct GridPlan {
    double lo = 0.0;
    double h_eff = 0.0;
    std::int64_t n = 0;

    double x(std::int64_t i) const noexcept { return lo + static_cast<double>(i) * h_eff; }
};

inline GridPlan plan_grid(double R, double x0, double h) {
    if (!(R > 0.0) || !std::isfinite(R))
        throw std::invalid_argument("mean estimator: radius R must be positive and finite");
    if (!std::isfinite(x0)) throw std::invalid_argument("mean estimator: center must be finite");
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("mean estimator: grid step must be positive and finite");
    const double steps = std::ceil(2.0 * R / h);
    if (!(steps <= 1e12)) throw std::invalid_argument("mean estimator: grid too large");
    std::int64_t n = static_cast<std::int64_t>(steps);
    n = ((n + 15) / 16) * 16;
    if (n < 16) n = 16;
    GridPlan g;
    g.lo = x0 - R;
    g.h_eff = 2.0 * R / static_cast<double>(n);
    g.n = n;
    return g;
}

/// Trapezoid sum of one batch of consecutive subintervals [i0, i1]:
/// h * (f(x_i0)/2 + sum interior + f(x_i1)/2). Grid points are computed by
/// one fixed formula, so the result is bit-identical however batches are
/// scheduled.
template <class F, class T>
T batch_trapezoid(F& f, const GridPlan& g, std::int64_t i0, std::int64_t i1) {
    T acc = f(g.x(i0)) * 0.5;
    for (std::int64_t i = i0 + 1; i < i1; ++i) acc += f(g.x(i));
    acc += f(g.x(i1)) * 0.5;
    return acc * g.h_eff;
}

} // namespace detail

/// Composite-trapezoid estimate of the ball average (1/2R) integral of f
/// over [x0-R, x0+R]. The window is split into 16 equal batches evaluated
/// independently (in parallel for large grids) and combined in fixed order;
/// the batch integrals also furnish the partial estimates at R/4 and R/2 and
/// the batch-means standard error.
template <class F, class T = std::invoke_result_t<F&, double>>
BasicMeanEstimate<T> window_average(F&& f, double R, double x0, double h = kDefaultGridStep) {
    static_assert(std::is_same_v<T, double> || std::is_same_v<T, std::complex<double>>,
                  "window_average: signal must return double or complex<double>");
    const detail::GridPlan g = detail::plan_grid(R, x0, h);
    const std::int64_t per = g.n / 16;

    std::array<T, 16> batch{};
    const bool parallel = g.n >= (std::int64_t{1} << 17);
    if (parallel) {
        std::array<std::future<T>, 16> fut;
        for (int b = 0; b < 16; ++b)
            fut[static_cast<std::size_t>(b)] =
                std::async(std::launch::async, [&f, &g, per, b] {
                    return detail::batch_trapezoid<F, T>(f, g, per * b, per * (b + 1));
                });
        for (int b = 0; b < 16; ++b) batch[static_cast<std::size_t>(b)] = fut[static_cast<std::size_t>(b)].get();
    } else {
        for (int b = 0; b < 16; ++b)
            batch[static_cast<std::size_t>(b)] = detail::batch_trapezoid<F, T>(f, g, per * b, per * (b + 1));
    }

    const auto range_sum = [&batch](int b0, int b1) {
        T acc{};
        for (int b = b0; b < b1; ++b) acc += batch[static_cast<std::size_t>(b)];
        return acc;
    };

    BasicMeanEstimate<T> est;
    est.R = R;
    const T total = range_sum(0, 16);
    est.value = total / (2.0 * R);
    est.partials.emplace_back(R / 4.0, range_sum(6, 10) / (R / 2.0));
    est.partials.emplace_back(R / 2.0, range_sum(4, 12) / R);
    est.partials.emplace_back(R, est.value);

    // Batch means over the 16 equal-width strips.
    const double strip = R / 8.0;
    T mean_of_means{};
    for (const T& s : batch) mean_of_means += s / strip;
    mean_of_means *= 1.0 / 16.0;
    double ss = 0.0;
    for (const T& s : batch) ss += detail::abs_sq(s / strip - mean_of_means);
    est.stderr_ = std::sqrt(ss / (16.0 * 15.0));
    return est;
}

/// M(f) over the ball of radius R centred at x0.
template <class F>
MeanEstimate mean_value(F&& f, double R, double x0 = 0.0, double h = kDefaultGridStep) {
    return window_average(std::forward<F>(f), R, x0, h);
}

/// Quadratic seminorm estimate sqrt(M(f^2)), with the dispersion of the
/// inner mean propagated through the square root (delta method).
template <class F>
MeanEstimate besicovitch_seminorm2(F&& f, double R, double h = kDefaultGridStep) {
    auto sq = [g = std::forward<F>(f)](double t) {
        const double v = g(t);
        return v * v;
    };
    const MeanEstimate inner = window_average(sq, R, 0.0, h);
    MeanEstimate est;
    est.R = inner.R;
    est.value = std::sqrt(inner.value);
    for (const auto& [Ri, vi] : inner.partials)
        est.partials.emplace_back(Ri, std::sqrt(vi));
    est.stderr_ = est.value > 0.0 ? inner.stderr_ / (2.0 * est.value) : inner.stderr_;
    return est;
}

/// Bohr coefficient estimate a(lambda) = M(f(t) e^{-i lambda t}). The signal
/// and the exponential are sampled on one shared grid; the step is halved
/// until |lambda| h <= 1/2 so the phase is well resolved per step.
template <class F>
ComplexMeanEstimate bohr_coefficient(F&& f, double lambda, double R, double h = kDefaultGridStep) {
    if (!std::isfinite(lambda))
        throw std::invalid_argument("bohr_coefficient: lambda must be finite");
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("bohr_coefficient: grid step must be positive and finite");
    while (std::abs(lambda) * h > 0.5) h /= 2.0;
    auto g = [&f, lambda](double t) {
        return f(t) * std::complex<double>(std::cos(lambda * t), -std::sin(lambda * t));
    };
    return window_average(g, R, 0.0, h);
}

/// Batch of Bohr coefficients over a frequency list. Per-frequency results
/// are produced by the very same estimator call as a lone bohr_coefficient,
/// so the two agree bit for bit.
struct SpectrumScan {
    std::vector<double> lambdas;
    std::vector<std::complex<double>> coefficients;
    std::vector<double> stderrs;
    double R = 0.0;
};

template <class F>
SpectrumScan spectrum_scan(F&& f, const std::vector<double>& lambdas, double R,
                           double h = kDefaultGridStep) {
    if (lambdas.empty()) throw std::invalid_argument("spectrum_scan: frequency list is empty");
    SpectrumScan scan;
    scan.lambdas = lambdas;
    scan.R = R;
    scan.coefficients.reserve(lambdas.size());
    scan.stderrs.reserve(lambdas.size());
    for (double lam : lambdas) {
        const ComplexMeanEstimate e = bohr_coefficient(f, lam, R, h);
        scan.coefficients.push_back(e.value);
        scan.stderrs.push_back(e.stderr_);
    }
    return scan;
}

} // namespace ergolat

#endif // ERGOLAT_MEANS_HPP
