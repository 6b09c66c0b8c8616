#pragma once
// Transmitted-information accounting: how many classical bits the coherent
// protocol effectively sends at mean photon number mu, and where it starts
// beating the classical strategies.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "matchsim/coherent.hpp"

namespace matchsim::resource {

enum class TiMetric {
    kLogN,       // mu * log2(n)
    kLogNPlusE,  // mu * (log2(n) + log2(e))
};

enum class ClassicalBound { kBestKnown, kLowerBound };

std::string_view to_string(TiMetric m);
TiMetric ti_metric_from_string(std::string_view s);
std::string_view to_string(ClassicalBound b);
ClassicalBound classical_bound_from_string(std::string_view s);

double ti_quantum(int n, double mu, TiMetric metric);
double ti_classical(int n, double p_target, ClassicalBound bound);

// Unified view of the closed-form error models; post_selected switches to the
// conditional (abstains-dropped) error.
double analytic_error(Protocol protocol, int n, double mu,
                      const coherent::ImperfectionModel& model, bool post_selected);

class infeasibility_error : public std::runtime_error {
  public:
    infeasibility_error(const std::string& what, double floor)
        : std::runtime_error(what), error_floor(floor) {}
    double error_floor;  // smallest error seen while searching
};

struct OptimizerOptions {
    double mu_tolerance = 1e-4;
    double mu_max = 1e3;
};

// Minimal mu with analytic error <= p_target, by doubling bracket plus
// bisection. The error model must be non-increasing on the bracket (checked);
// if no mu <= mu_max reaches the target, throws infeasibility_error carrying
// the observed error floor.
double optimal_mu(Protocol protocol, int n, const coherent::ImperfectionModel& model,
                  double p_target, bool post_selected = false,
                  const OptimizerOptions& options = {});

struct ThresholdOptions {
    std::int64_t n_max = 10'000'000;
    OptimizerOptions optimizer;
};

// Smallest even n whose optimized quantum transmitted information drops below
// the classical requirement; nullopt when no n <= n_max qualifies. Geometric
// scan locates the crossing, then integer bisection on the even grid pins it.
std::optional<std::int64_t> advantage_threshold(Protocol protocol,
                                                const coherent::ImperfectionModel& model,
                                                double p_target, TiMetric metric,
                                                ClassicalBound bound,
                                                bool post_selected = false,
                                                const ThresholdOptions& options = {});

struct ResourcePoint {
    std::int64_t n = 0;
    bool feasible = false;
    double mu_opt = 0.0;
    double p_error = 0.0;  // analytic error achieved at mu_opt
    double ti_quantum = 0.0;
    double ti_classical_best = 0.0;
    double ti_classical_lb = 0.0;
};

// One point per n; infeasible points keep the classical columns and are
// flagged rather than dropped.
std::vector<ResourcePoint> resource_curve(Protocol protocol,
                                          const coherent::ImperfectionModel& model,
                                          double p_target, TiMetric metric,
                                          std::span<const std::int64_t> n_grid,
                                          bool post_selected = false,
                                          const OptimizerOptions& options = {});

}  // namespace matchsim::resource
