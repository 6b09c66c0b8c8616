#pragma once
// Classical one-way strategies for the matching parity problem, and the
// closed-form message-size bounds they are measured against.

#include <cstdint>

#include "matchsim/protocol.hpp"

namespace matchsim::classical {

// Message size c = sqrt(2 n ln(1/p)) for which the birthday-style strategy
// reaches miss probability p. Real-valued; see the ceil variant for bits.
double best_known_message_size(int n, double p_target);
double best_known_message_size_ceil(int n, double p_target);

// One-way lower bound (log2 e / e) (1/2 - p) sqrt(n - 1) valid for any
// classical protocol with error probability p < 1/2.
double lower_bound_bits(int n, double p_target);

// Birthday model for the miss probability: each of the c(c-1)/2 position
// pairs is treated as landing in the queried matching independently with
// probability 1/(n-1), giving (1 - 1/(n-1))^{c(c-1)/2}. This is a model,
// not the sampling-without-replacement coverage probability below; the two
// agree to O(c^3/n^2).
double exact_miss_probability(int n, std::int64_t c);

// Coverage miss probability of the concrete protocol: c distinct positions
// drawn uniformly, miss = no edge of the queried matching has both endpoints
// drawn. Product form prod_{j<c} (n - 2j)/(n - j), zero once c > n/2.
double protocol_miss_probability(int n, int c);

// One protocol round: Alice samples c distinct positions of x uniformly; if
// some edge of m has both endpoints sampled Bob reports that edge with its
// true parity, otherwise he reports a uniformly random edge of m with a
// fair-coin parity and the outcome is flagged guessed.
ProtocolOutcome run_protocol(const BitString& x, const Matching& m, int c, Rng& rng);

struct ErrorEstimate {
    double p_error = 0.0;
    double ci_low = 0.0;   // Wilson 95%
    double ci_high = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
};

// Monte Carlo error over fresh random x and uniformly random matchings.
// Trial t uses the derived stream (seed, t), so the estimate is reproducible
// and independent of execution order.
ErrorEstimate estimate_error(int n, int c, std::uint64_t trials, std::uint64_t seed);

}  // namespace matchsim::classical
