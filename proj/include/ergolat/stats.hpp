#ifndef ERGOLAT_STATS_HPP
#define ERGOLAT_STATS_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ergolat {

/// Survival function P(X >= x) of a chi-square variable. Only the two cases
/// the invariance tests need are supported, both with closed forms:
/// dof 1 -> erfc(sqrt(x/2)), dof 2 -> exp(-x/2).
inline double chi2_survival(double x, int dof) {
    if (!(x >= 0.0)) throw std::invalid_argument("chi2_survival: requires x >= 0");
    switch (dof) {
        case 1: return std::erfc(std::sqrt(x / 2.0));
        case 2: return std::exp(-x / 2.0);
        default: throw std::invalid_argument("chi2_survival: only dof 1 and 2 are supported");
    }
}

/// Pearson statistic for k successes out of n Bernoulli(p0) trials,
/// (k - n p0)^2 / (n p0 (1 - p0)), distributed chi-square(1) under the null.
/// Degenerate p0 in {0,1} yields 0 when the observation matches the certain
/// outcome and +infinity otherwise.
inline double binomial_chi2(std::int64_t k, std::int64_t n, double p0) {
    if (n <= 0) throw std::invalid_argument("binomial_chi2: requires n > 0");
    if (k < 0 || k > n) throw std::invalid_argument("binomial_chi2: requires 0 <= k <= n");
    if (!(p0 >= 0.0 && p0 <= 1.0))
        throw std::invalid_argument("binomial_chi2: p0 must lie in [0,1]");
    if (p0 == 0.0 || p0 == 1.0) {
        const bool matches = (p0 == 0.0) ? (k == 0) : (k == n);
        return matches ? 0.0 : std::numeric_limits<double>::infinity();
    }
    const double d = static_cast<double>(k) - static_cast<double>(n) * p0;
    return d * d / (static_cast<double>(n) * p0 * (1.0 - p0));
}

/// Sample mean and its standard error from a list of batch means: the
/// batch-means dispersion estimate sqrt(sum (m_b - mean)^2 / (B (B-1))).
struct BatchSummary {
    double mean = 0.0;
    double stderr_ = 0.0;
};

inline BatchSummary batch_summary(const std::vector<double>& batch_means) {
    const std::size_t B = batch_means.size();
    if (B < 2) throw std::invalid_argument("batch_summary: requires at least two batches");
    double sum = 0.0;
    for (double m : batch_means) sum += m;
    const double mean = sum / static_cast<double>(B);
    double ss = 0.0;
    for (double m : batch_means) {
        const double d = m - mean;
        ss += d * d;
    }
    BatchSummary out;
    out.mean = mean;
    out.stderr_ = std::sqrt(ss / (static_cast<double>(B) * static_cast<double>(B - 1)));
    return out;
}

} // namespace ergolat

#endif // ERGOLAT_STATS_HPP
