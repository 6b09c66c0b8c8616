#include "matchsim/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace matchsim::stats {

Interval wilson(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) throw std::invalid_argument("wilson: trials must be positive");
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {phat, center - half, center + half};
}

double score_z(std::uint64_t successes, std::uint64_t trials, double p0) {
    if (trials == 0) throw std::invalid_argument("score_z: trials must be positive");
    if (p0 < 0.0 || p0 > 1.0) throw std::invalid_argument("score_z: p0 outside [0, 1]");
    const double phat = static_cast<double>(successes) / static_cast<double>(trials);
    const double se = std::sqrt(p0 * (1.0 - p0) / static_cast<double>(trials));
    if (se == 0.0)
        return phat == p0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(phat - p0) / se;
}

double chi_square_statistic(std::span<const std::uint64_t> counts) {
    if (counts.empty())
        throw std::invalid_argument("chi_square_statistic: no cells");
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) throw std::invalid_argument("chi_square_statistic: no samples");
    const double expected =
        static_cast<double>(total) / static_cast<double>(counts.size());
    double stat = 0.0;
    for (auto c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return stat;
}

double chi_square_pvalue(double statistic, int dof) {
    if (dof <= 0) throw std::invalid_argument("chi_square_pvalue: dof must be positive");
    if (statistic <= 0.0) return 1.0;
    boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, statistic));
}

double mean(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean: empty");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs) {
    if (xs.size() < 2) throw std::invalid_argument("sample_std: need >= 2 values");
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("least_squares_slope: need matched size >= 2");
    const double mx = mean(x);
    const double my = mean(y);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    if (den == 0.0) throw std::invalid_argument("least_squares_slope: degenerate x");
    return num / den;
}

}  // namespace matchsim::stats
