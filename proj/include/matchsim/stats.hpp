#pragma once
// Small statistics toolbox shared by the simulators and their tests.

#include <cstdint>
#include <span>

namespace matchsim::stats {

// 95% two-sided normal quantile used for the default confidence intervals.
inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
    double center = 0.0;
    double low = 0.0;
    double high = 0.0;
};

// Wilson score interval for a binomial proportion.
Interval wilson(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

// Score statistic |p_hat - p0| / sqrt(p0 (1 - p0) / trials). This is the
// standardized deviation under the hypothesized p0, i.e. "how many standard
// errors away" an observed frequency sits.
double score_z(std::uint64_t successes, std::uint64_t trials, double p0);

// Pearson statistic against the uniform expectation over counts.size() cells.
double chi_square_statistic(std::span<const std::uint64_t> counts);

// Upper-tail p-value of the chi-square distribution.
double chi_square_pvalue(double statistic, int dof);

double mean(std::span<const double> xs);
double sample_std(std::span<const double> xs);

// Ordinary least-squares slope of y against x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

}  // namespace matchsim::stats
