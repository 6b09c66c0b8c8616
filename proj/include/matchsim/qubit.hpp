#pragma once
// Ideal log2(n)-qubit fingerprint protocol. The state is the real vector
// a_k = (-1)^{x_k} / sqrt(n); measuring in the basis {(|k> +- |l>)/sqrt(2)}
// over the edges of a matching yields outcome (edge, parity) with
// P(edge, 0) = (a_k + a_l)^2 / 2 and P(edge, 1) = (a_k - a_l)^2 / 2, so the
// reported parity always equals x_k xor x_l and each edge has marginal 2/n.

#include <span>
#include <vector>

#include "matchsim/protocol.hpp"

namespace matchsim::qubit {

struct Fingerprint {
    std::vector<double> amplitudes;
    int size() const { return static_cast<int>(amplitudes.size()); }
};

Fingerprint build_fingerprint(const BitString& x);

struct EdgeOutcome {
    Edge edge;
    int parity = 0;
    double probability = 0.0;
};

// The full outcome distribution for one matching: n entries (two parities per
// edge), probabilities summing to 1.
std::vector<EdgeOutcome> edge_outcome_distribution(const Fingerprint& fp,
                                                   const Matching& m);

// Samples one measurement by inverse CDF over the distribution above.
ProtocolOutcome measure_matching(const Fingerprint& fp, const Matching& m, Rng& rng);

// Same draw from an already-built distribution; lets bulk samplers amortize
// the distribution construction.
ProtocolOutcome sample_outcome(std::span<const EdgeOutcome> dist, int matching_index,
                               Rng& rng);

}  // namespace matchsim::qubit
