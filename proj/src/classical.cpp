#include "matchsim/classical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "matchsim/stats.hpp"

namespace matchsim::classical {

namespace {

// log2(e) / e
constexpr double kLowerBoundConstant = 0.5307378454882157;

void check_p_target(double p, double upper) {
    if (!(p > 0.0) || !(p < upper))
        throw std::invalid_argument("p_target " + std::to_string(p) +
                                    " outside (0, " + std::to_string(upper) + ")");
}

}  // namespace

double best_known_message_size(int n, double p_target) {
    check_p_target(p_target, 1.0);
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    return std::sqrt(2.0 * static_cast<double>(n) * std::log(1.0 / p_target));
}

double best_known_message_size_ceil(int n, double p_target) {
    return std::ceil(best_known_message_size(n, p_target));
}

double lower_bound_bits(int n, double p_target) {
    check_p_target(p_target, 0.5);
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    return kLowerBoundConstant * (0.5 - p_target) *
           std::sqrt(static_cast<double>(n - 1));
}

double exact_miss_probability(int n, std::int64_t c) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("n must be even, >= 2");
    if (c < 0) throw std::invalid_argument("c must be >= 0");
    const double pairs = 0.5 * static_cast<double>(c) * static_cast<double>(c - 1);
    if (pairs == 0.0) return 1.0;
    const double q = 1.0 - 1.0 / static_cast<double>(n - 1);
    if (q == 0.0) return 0.0;  // n = 2: any two positions are the one edge
    return std::exp(pairs * std::log(q));
}

double protocol_miss_probability(int n, int c) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("n must be even, >= 2");
    if (c < 0 || c > n) throw std::invalid_argument("c outside [0, n]");
    double p = 1.0;
    for (int j = 0; j < c; ++j) {
        const int safe = n - 2 * j;
        if (safe <= 0) return 0.0;
        p *= static_cast<double>(safe) / static_cast<double>(n - j);
    }
    return p;
}

ProtocolOutcome run_protocol(const BitString& x, const Matching& m, int c, Rng& rng) {
    const int n = x.size();
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("|x| must be even, >= 2");
    if (c < 0 || c > n)
        throw std::invalid_argument("sample size c = " + std::to_string(c) +
                                    " outside [0, n]");
    if (static_cast<int>(m.edges.size()) != n / 2)
        throw std::invalid_argument("matching size does not fit |x|");

    // Partial Fisher-Yates over 0-based positions: first c entries = sample.
    std::vector<int> positions(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) positions[static_cast<std::size_t>(i)] = i;
    std::vector<char> sampled(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < c; ++i) {
        const auto j =
            i + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n - i)));
        std::swap(positions[static_cast<std::size_t>(i)],
                  positions[static_cast<std::size_t>(j)]);
        sampled[static_cast<std::size_t>(positions[static_cast<std::size_t>(i)])] = 1;
    }

    for (const Edge& e : m.edges) {
        if (sampled[static_cast<std::size_t>(e.k - 1)] &&
            sampled[static_cast<std::size_t>(e.l - 1)]) {
            return ProtocolOutcome{e, m.index, parity(x, e), false};
        }
    }
    const auto pick = uniform_index(rng, m.edges.size());
    const Edge e = m.edges[static_cast<std::size_t>(pick)];
    const int coin = static_cast<int>(uniform_index(rng, 2));
    return ProtocolOutcome{e, m.index, coin, true};
}

ErrorEstimate estimate_error(int n, int c, std::uint64_t trials, std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    const MatchingSet ms = MatchingSet::build(n);
    std::uint64_t errors = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        Rng rng = make_stream(seed, t);
        const BitString x = BitString::random(n, rng);
        const int index = 1 + static_cast<int>(
                                  uniform_index(rng, static_cast<std::uint64_t>(n - 1)));
        const Matching m = ms.matching(index);
        const ProtocolOutcome out = run_protocol(x, m, c, rng);
        if (out.parity != parity(x, out.edge)) ++errors;
    }
    const auto ci = stats::wilson(errors, trials);
    return ErrorEstimate{ci.center, ci.low, ci.high, trials, errors};
}

}  // namespace matchsim::classical
