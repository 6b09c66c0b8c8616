#include "matchsim/matchings.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace matchsim {

namespace {

void check_even_n(int n) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("matching family needs even n >= 2, got " +
                                    std::to_string(n));
}

void check_matching_index(int n, int index) {
    if (index < 1 || index > n - 1)
        throw std::invalid_argument("matching index " + std::to_string(index) +
                                    " outside [1, " + std::to_string(n - 1) + "]");
}

}  // namespace

Edge make_edge(int a, int b) {
    if (a < 1 || b < 1)
        throw std::invalid_argument("edge endpoints must be >= 1");
    if (a == b)
        throw std::invalid_argument("edge endpoints must differ, got " +
                                    std::to_string(a) + " twice");
    return a < b ? Edge{a, b} : Edge{b, a};
}

Edge matching_edge(int n, int matching_index, int slot) {
    check_even_n(n);
    check_matching_index(n, matching_index);
    if (slot < 0 || slot >= n / 2)
        throw std::invalid_argument("edge slot " + std::to_string(slot) +
                                    " outside [0, n/2)");
    const int m = n - 1;                    // rotating nodes 0..m-1, node m fixed
    const int r = n - 1 - matching_index;   // rotation for this matching
    if (slot == 0) return make_edge(r + 1, n);
    const int a = (r + slot) % m;
    const int b = (r - slot % m + m) % m;
    return make_edge(a + 1, b + 1);
}

int matching_index_of_edge(int n, Edge e) {
    check_even_n(n);
    const Edge edge = make_edge(e.k, e.l);  // normalizes and validates shape
    if (edge.l > n)
        throw std::invalid_argument("edge endpoint " + std::to_string(edge.l) +
                                    " exceeds n = " + std::to_string(n));
    const int m = n - 1;
    const int a = edge.k - 1;
    const int b = edge.l - 1;
    int r;
    if (b == m) {
        r = a;
    } else {
        // a + b == 2r (mod m); m is odd so 2^{-1} = n/2 (mod m).
        r = static_cast<int>((static_cast<long long>(a + b) * (n / 2)) % m);
    }
    return n - 1 - r;
}

MatchingSet MatchingSet::build(int n, Storage storage) {
    check_even_n(n);
    MatchingSet ms(n);
    const bool want_explicit =
        storage == Storage::kExplicit ||
        (storage == Storage::kAuto && n <= kExplicitThreshold);
    if (want_explicit) {
        ms.matchings_.reserve(static_cast<std::size_t>(n - 1));
        for (int i = 1; i <= n - 1; ++i) {
            Matching matching{i, {}};
            matching.edges.reserve(static_cast<std::size_t>(n / 2));
            for (int slot = 0; slot < n / 2; ++slot)
                matching.edges.push_back(matching_edge(n, i, slot));
            ms.matchings_.push_back(std::move(matching));
        }
    }
    return ms;
}

MatchingSet::MatchingSet(int n, std::vector<Matching> matchings) : n_(n) {
    matchings_ = std::move(matchings);
    if (matchings_.empty())
        throw std::invalid_argument("explicit matching set needs matchings");
}

Matching MatchingSet::matching(int index) const {
    if (is_explicit()) {
        if (index < 1 || index > size())
            throw std::invalid_argument("matching index outside stored family");
        return matchings_[static_cast<std::size_t>(index - 1)];
    }
    check_matching_index(n_, index);
    Matching matching{index, {}};
    matching.edges.reserve(static_cast<std::size_t>(n_ / 2));
    for (int slot = 0; slot < n_ / 2; ++slot)
        matching.edges.push_back(matching_edge(n_, index, slot));
    return matching;
}

Edge MatchingSet::edge(int matching_index, int slot) const {
    if (is_explicit()) {
        if (matching_index < 1 || matching_index > size())
            throw std::invalid_argument("matching index outside stored family");
        const auto& edges = matchings_[static_cast<std::size_t>(matching_index - 1)].edges;
        if (slot < 0 || static_cast<std::size_t>(slot) >= edges.size())
            throw std::invalid_argument("edge slot outside matching");
        return edges[static_cast<std::size_t>(slot)];
    }
    return matching_edge(n_, matching_index, slot);
}

int MatchingSet::matching_of_edge(Edge e) const {
    return matching_index_of_edge(n_, e);
}

ValidationReport validate_matching_set(const MatchingSet& ms) {
    ValidationReport report;
    const int n = ms.n();
    std::set<Edge> seen;
    for (int i = 1; i <= ms.size(); ++i) {
        const Matching matching = ms.matching(i);
        std::vector<int> coverage(static_cast<std::size_t>(n) + 1, 0);
        for (const Edge& e : matching.edges) {
            if (e.k < 1 || e.l > n || e.k >= e.l) {
                report.perfect = false;
                report.failures.push_back("matching " + std::to_string(i) +
                                          " has a malformed edge");
                continue;
            }
            ++coverage[static_cast<std::size_t>(e.k)];
            ++coverage[static_cast<std::size_t>(e.l)];
            if (!seen.insert(Edge{e.k, e.l}).second) {
                report.disjoint = false;
                report.failures.push_back("edge (" + std::to_string(e.k) + "," +
                                          std::to_string(e.l) + ") repeats in matching " +
                                          std::to_string(i));
            }
        }
        for (int v = 1; v <= n; ++v) {
            if (coverage[static_cast<std::size_t>(v)] != 1) {
                report.perfect = false;
                report.failures.push_back("matching " + std::to_string(i) +
                                          " covers node " + std::to_string(v) + " " +
                                          std::to_string(coverage[static_cast<std::size_t>(v)]) +
                                          " times");
            }
        }
    }
    const std::size_t all_edges =
        static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
    if (seen.size() != all_edges) {
        report.complete = false;
        report.failures.push_back("family covers " + std::to_string(seen.size()) +
                                  " of " + std::to_string(all_edges) + " edges");
    }
    return report;
}

}  // namespace matchsim
