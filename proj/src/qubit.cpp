#include "matchsim/qubit.hpp"

#include <cmath>
#include <stdexcept>

namespace matchsim::qubit {

Fingerprint build_fingerprint(const BitString& x) {
    const int n = x.size();
    if (n < 1) throw std::invalid_argument("empty input");
    Fingerprint fp;
    fp.amplitudes.resize(static_cast<std::size_t>(n));
    const double a = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k)
        fp.amplitudes[static_cast<std::size_t>(k)] = x.bit(k) ? -a : a;
    return fp;
}

std::vector<EdgeOutcome> edge_outcome_distribution(const Fingerprint& fp,
                                                   const Matching& m) {
    const int n = fp.size();
    for (const Edge& e : m.edges)
        if (e.k < 1 || e.l > n)
            throw std::invalid_argument("matching does not fit fingerprint size");
    std::vector<EdgeOutcome> dist;
    dist.reserve(m.edges.size() * 2);
    for (const Edge& e : m.edges) {
        const double ak = fp.amplitudes[static_cast<std::size_t>(e.k - 1)];
        const double al = fp.amplitudes[static_cast<std::size_t>(e.l - 1)];
        const double plus = ak + al;
        const double minus = ak - al;
        dist.push_back({e, 0, plus * plus / 2.0});
        dist.push_back({e, 1, minus * minus / 2.0});
    }
    return dist;
}

ProtocolOutcome measure_matching(const Fingerprint& fp, const Matching& m, Rng& rng) {
    const auto dist = edge_outcome_distribution(fp, m);
    return sample_outcome(dist, m.index, rng);
}

ProtocolOutcome sample_outcome(std::span<const EdgeOutcome> dist, int matching_index,
                               Rng& rng) {
    const double u = uniform01(rng);
    double acc = 0.0;
    for (const EdgeOutcome& o : dist) {
        acc += o.probability;
        if (u < acc) return ProtocolOutcome{o.edge, matching_index, o.parity, false};
    }
    // Rounding can leave acc a hair below 1; the tail belongs to the last
    // nonzero outcome.
    for (auto it = dist.rbegin(); it != dist.rend(); ++it)
        if (it->probability > 0.0)
            return ProtocolOutcome{it->edge, matching_index, it->parity, false};
    throw std::logic_error("outcome distribution sums to zero");
}

}  // namespace matchsim::qubit
