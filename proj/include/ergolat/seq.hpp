#ifndef ERGOLAT_SEQ_HPP
#define ERGOLAT_SEQ_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ergolat/rng.hpp"

namespace ergolat {

/// Site value of the Bernoulli(q) spin field at integer index m: -1 with
/// probability q, +1 with probability 1-q, a pure function of (seed, q, m).
/// Distinct m give independent counter-mode draws. q = 0 and q = 1 are
/// admitted as degenerate fixtures (all +1 / all -1).
inline int bernoulli_site(std::uint64_t seed, double q, std::int64_t m) {
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("bernoulli_site: q must lie in [0,1]");
    const std::uint64_t bits =
        detail::mix64(seed + detail::kGoldenGamma * static_cast<std::uint64_t>(m));
    return detail::to_unit(bits) < q ? -1 : +1;
}

/// A lazily indexable bi-infinite +-1 sequence under the Bernoulli product
/// measure. Sites are generated counter-mode, so any index is addressable in
/// O(1) and shifting is a constant-time offset adjustment. Immutable; safe
/// for concurrent use.
class SequenceStream {
  public:
    SequenceStream(std::uint64_t seed, double q) : seed_(seed), q_(q), offset_(0) {
        if (!(q >= 0.0 && q <= 1.0))
            throw std::invalid_argument("SequenceStream: q must lie in [0,1]");
    }

    int site(std::int64_t m) const {
        std::int64_t idx = 0;
        if (__builtin_add_overflow(m, offset_, &idx))
            throw std::overflow_error("SequenceStream::site: index + offset overflows");
        return bernoulli_site(seed_, q_, idx);
    }

    /// tau_k of this stream: result's site m equals this stream's site m+k.
    SequenceStream shifted(std::int64_t k) const {
        SequenceStream out = *this;
        if (__builtin_add_overflow(offset_, k, &out.offset_))
            throw std::overflow_error("SequenceStream::shifted: offset accumulation overflows");
        return out;
    }

    std::uint64_t seed() const noexcept { return seed_; }
    double q() const noexcept { return q_; }
    std::int64_t offset() const noexcept { return offset_; }

    friend bool operator==(const SequenceStream&, const SequenceStream&) = default;

  private:
    std::uint64_t seed_;
    double q_;
    std::int64_t offset_;
};

inline SequenceStream shift_seq(const SequenceStream& s, std::int64_t k) { return s.shifted(k); }

/// Materialized finite slice of a sequence over the half-open range [lo, hi).
struct SequenceWindow {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::vector<int> values;

    static SequenceWindow from_stream(const SequenceStream& s, std::int64_t lo, std::int64_t hi) {
        if (hi <= lo) throw std::invalid_argument("SequenceWindow: requires hi > lo");
        SequenceWindow w;
        w.lo = lo;
        w.hi = hi;
        w.values.reserve(static_cast<std::size_t>(hi - lo));
        for (std::int64_t m = lo; m < hi; ++m) w.values.push_back(s.site(m));
        return w;
    }

    static SequenceWindow from_values(std::int64_t lo, std::vector<int> vals) {
        if (vals.empty()) throw std::invalid_argument("SequenceWindow: requires hi > lo");
        for (int v : vals)
            if (v != -1 && v != 1)
                throw std::invalid_argument("SequenceWindow: values must be -1 or +1");
        SequenceWindow w;
        w.lo = lo;
        w.hi = lo + static_cast<std::int64_t>(vals.size());
        w.values = std::move(vals);
        return w;
    }

    std::int64_t length() const noexcept { return hi - lo; }

    int at(std::int64_t m) const {
        if (m < lo || m >= hi) throw std::out_of_range("SequenceWindow::at: index outside window");
        return values[static_cast<std::size_t>(m - lo)];
    }
};

/// Result of a period scan over a finite window. `epsilon` is 0 for exact
/// scans. Listed periods are sorted and duplicate-free by construction.
struct PeriodReport {
    double epsilon = 0.0;
    std::int64_t max_p = 0;
    std::vector<std::int64_t> periods;
    std::int64_t window_len = 0;

    bool empty() const noexcept { return periods.empty(); }
};

/// All p in [1, max_p] with x_{k+p} = x_k for every k the window can check.
/// The bi-infinite quantifier is truncated to the window, which can only
/// admit false positives; callers see window_len and reason accordingly.
inline PeriodReport detect_exact_periods(const SequenceWindow& w, std::int64_t max_p) {
    if (max_p < 1 || max_p >= w.length())
        throw std::invalid_argument("detect_exact_periods: requires 1 <= max_p < window length");
    PeriodReport report;
    report.epsilon = 0.0;
    report.max_p = max_p;
    report.window_len = w.length();
    const auto n = static_cast<std::size_t>(w.length());
    for (std::int64_t p = 1; p <= max_p; ++p) {
        bool ok = true;
        for (std::size_t k = 0; k + static_cast<std::size_t>(p) < n; ++k) {
            if (w.values[k + static_cast<std::size_t>(p)] != w.values[k]) {
                ok = false;
                break;
            }
        }
        if (ok) report.periods.push_back(p);
    }
    return report;
}

/// All p in [1, max_p] with sup_k |x_{k+p} - x_k| < eps over the window.
/// Spin differences are 0 or 2 in magnitude, so for eps in (0,2] this
/// coincides with the exact scan; the property tests pin that down.
inline PeriodReport detect_almost_periods_seq(const SequenceWindow& w, double eps,
                                              std::int64_t max_p) {
    if (!(eps > 0.0)) throw std::invalid_argument("detect_almost_periods_seq: requires eps > 0");
    if (max_p < 1 || max_p >= w.length())
        throw std::invalid_argument(
            "detect_almost_periods_seq: requires 1 <= max_p < window length");
    PeriodReport report;
    report.epsilon = eps;
    report.max_p = max_p;
    report.window_len = w.length();
    const auto n = static_cast<std::size_t>(w.length());
    for (std::int64_t p = 1; p <= max_p; ++p) {
        double sup = 0.0;
        for (std::size_t k = 0; k + static_cast<std::size_t>(p) < n; ++k) {
            const double d =
                std::abs(static_cast<double>(w.values[k + static_cast<std::size_t>(p)]) -
                         static_cast<double>(w.values[k]));
            if (d > sup) sup = d;
            if (sup >= eps) break;
        }
        if (sup < eps) report.periods.push_back(p);
    }
    return report;
}

} // namespace ergolat

#endif // ERGOLAT_SEQ_HPP
