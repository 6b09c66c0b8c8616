#include "matchsim/resource.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "matchsim/classical.hpp"

namespace matchsim::resource {

namespace {

constexpr double kLog2E = 1.4426950408889634;

void check_target(double p_target) {
    if (!(p_target > 0.0) || !(p_target < 0.5))
        throw std::invalid_argument("p_target must lie in (0, 0.5)");
}

int as_int_n(std::int64_t n) {
    if (n < 2 || n > std::numeric_limits<int>::max())
        throw std::invalid_argument("n outside supported range");
    return static_cast<int>(n);
}

}  // namespace

std::string_view to_string(TiMetric m) {
    switch (m) {
        case TiMetric::kLogN: return "log_n";
        case TiMetric::kLogNPlusE: return "log_n_plus_e";
    }
    throw std::logic_error("unknown metric");
}

TiMetric ti_metric_from_string(std::string_view s) {
    if (s == "log_n") return TiMetric::kLogN;
    if (s == "log_n_plus_e") return TiMetric::kLogNPlusE;
    throw std::invalid_argument("unknown metric '" + std::string(s) + "'");
}

std::string_view to_string(ClassicalBound b) {
    switch (b) {
        case ClassicalBound::kBestKnown: return "best_known";
        case ClassicalBound::kLowerBound: return "lower_bound";
    }
    throw std::logic_error("unknown bound");
}

ClassicalBound classical_bound_from_string(std::string_view s) {
    if (s == "best_known") return ClassicalBound::kBestKnown;
    if (s == "lower_bound") return ClassicalBound::kLowerBound;
    throw std::invalid_argument("unknown classical bound '" + std::string(s) + "'");
}

double ti_quantum(int n, double mu, TiMetric metric) {
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    if (!(mu >= 0.0)) throw std::invalid_argument("mu must be >= 0");
    const double log2n = std::log2(static_cast<double>(n));
    switch (metric) {
        case TiMetric::kLogN: return mu * log2n;
        case TiMetric::kLogNPlusE: return mu * (log2n + kLog2E);
    }
    throw std::logic_error("unknown metric");
}

double ti_classical(int n, double p_target, ClassicalBound bound) {
    switch (bound) {
        case ClassicalBound::kBestKnown:
            return classical::best_known_message_size(n, p_target);
        case ClassicalBound::kLowerBound:
            return classical::lower_bound_bits(n, p_target);
    }
    throw std::logic_error("unknown bound");
}

double analytic_error(Protocol protocol, int n, double mu,
                      const coherent::ImperfectionModel& model, bool post_selected) {
    if (protocol == Protocol::kHiddenMatching)
        return post_selected ? coherent::hm_error_post_selected(n, mu, model)
                             : coherent::hm_error_analytic(n, mu, model);
    return post_selected ? coherent::sm_error_post_selected(n, mu, model)
                         : coherent::sm_error_analytic(n, mu, model);
}

double optimal_mu(Protocol protocol, int n, const coherent::ImperfectionModel& model,
                  double p_target, bool post_selected, const OptimizerOptions& options) {
    check_target(p_target);
    const auto f = [&](double mu) {
        return analytic_error(protocol, n, mu, model, post_selected);
    };

    double floor_seen = f(0.0);
    if (floor_seen <= p_target) return 0.0;

    double lo = 0.0;
    double hi = 1.0;
    bool bracketed = false;
    while (hi <= options.mu_max) {
        const double fhi = f(hi);
        floor_seen = std::min(floor_seen, fhi);
        if (fhi <= p_target) {
            bracketed = true;
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    if (!bracketed) {
        const double fmax = f(options.mu_max);
        floor_seen = std::min(floor_seen, fmax);
        if (fmax <= p_target) {
            hi = options.mu_max;
            bracketed = true;
        } else {
            throw infeasibility_error(
                "error target " + std::to_string(p_target) +
                    " unreachable for any mu <= " + std::to_string(options.mu_max) +
                    "; smallest error seen " + std::to_string(floor_seen),
                floor_seen);
        }
    }

    // The bisection below needs a non-increasing error model on [lo, hi].
    constexpr int kProbe = 17;
    double prev = f(lo);
    for (int i = 1; i <= kProbe; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / kProbe;
        const double fx = f(x);
        if (fx > prev + 1e-9)
            throw std::runtime_error("analytic error is not monotone on the bracket [" +
                                     std::to_string(lo) + ", " + std::to_string(hi) + "]");
        prev = fx;
    }

    while (hi - lo > options.mu_tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) <= p_target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

std::optional<std::int64_t> advantage_threshold(Protocol protocol,
                                                const coherent::ImperfectionModel& model,
                                                double p_target, TiMetric metric,
                                                ClassicalBound bound, bool post_selected,
                                                const ThresholdOptions& options) {
    check_target(p_target);
    const auto wins = [&](std::int64_t n64) {
        const int n = as_int_n(n64);
        const double mu = optimal_mu(protocol, n, model, p_target, post_selected,
                                     options.optimizer);
        return ti_quantum(n, mu, metric) < ti_classical(n, p_target, bound);
    };

    std::int64_t lo = 0;  // no advantage known here (0 = before the grid)
    std::int64_t hi = 2;
    while (true) {
        if (wins(hi)) break;
        lo = hi;
        hi *= 2;
        if (hi > options.n_max) {
            const std::int64_t last = options.n_max - (options.n_max % 2);
            if (last > lo && wins(last)) {
                hi = last;
                break;
            }
            return std::nullopt;
        }
    }

    while (hi - lo > 2) {
        std::int64_t mid = lo + (hi - lo) / 2;
        mid -= mid % 2;  // stay on the even grid
        if (mid <= lo) mid = lo + 2;
        if (wins(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

std::vector<ResourcePoint> resource_curve(Protocol protocol,
                                          const coherent::ImperfectionModel& model,
                                          double p_target, TiMetric metric,
                                          std::span<const std::int64_t> n_grid,
                                          bool post_selected,
                                          const OptimizerOptions& options) {
    check_target(p_target);
    std::vector<ResourcePoint> curve;
    curve.reserve(n_grid.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::int64_t n64 : n_grid) {
        const int n = as_int_n(n64);
        ResourcePoint point;
        point.n = n64;
        point.ti_classical_best = ti_classical(n, p_target, ClassicalBound::kBestKnown);
        point.ti_classical_lb = ti_classical(n, p_target, ClassicalBound::kLowerBound);
        try {
            point.mu_opt = optimal_mu(protocol, n, model, p_target, post_selected, options);
            point.p_error = analytic_error(protocol, n, point.mu_opt, model, post_selected);
            point.ti_quantum = resource::ti_quantum(n, point.mu_opt, metric);
            point.feasible = true;
        } catch (const infeasibility_error&) {
            point.feasible = false;
            point.mu_opt = nan;
            point.p_error = nan;
            point.ti_quantum = nan;
        }
        curve.push_back(point);
    }
    return curve;
}

}  // namespace matchsim::resource
