#pragma once
// Edge-disjoint perfect matching families on the complete graph K_n.
//
// For even n the family has n-1 perfect matchings of n/2 edges that together
// partition all n(n-1)/2 edges, so every edge belongs to exactly one matching.
// Construction is the round-robin "circle" schedule: node n stays fixed while
// nodes 1..n-1 rotate. Matching i is rotation r = n-1-i, which makes the
// small-n family come out in the conventional order (for n = 4: sigma_1 =
// {(1,2),(3,4)}, sigma_2 = {(1,3),(2,4)}, sigma_3 = {(1,4),(2,3)}).
//
// Node indices are 1-based in this API; any 0-based arithmetic stays internal.

#include <string>
#include <vector>

namespace matchsim {

struct Edge {
    int k = 0;
    int l = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Canonical form k < l; throws std::invalid_argument on a == b or indices < 1.
Edge make_edge(int a, int b);

struct Matching {
    int index = 0;  // 1-based position within the family
    std::vector<Edge> edges;
};

// Arithmetic (closed-form) versions of the schedule. `slot` is the position
// of an edge inside its matching, in [0, n/2).
Edge matching_edge(int n, int matching_index, int slot);
int matching_index_of_edge(int n, Edge e);

class MatchingSet {
  public:
    enum class Storage { kAuto, kExplicit, kImplicit };

    // Above this n the set is kept implicit and matchings are generated on
    // demand from the closed form; both representations agree edge for edge.
    static constexpr int kExplicitThreshold = 512;

    static MatchingSet build(int n, Storage storage = Storage::kAuto);

    // Unchecked assembly from parts; used by validation tests to construct
    // deliberately broken families.
    MatchingSet(int n, std::vector<Matching> matchings);

    int n() const { return n_; }
    int size() const {
        return is_explicit() ? static_cast<int>(matchings_.size()) : n_ - 1;
    }
    bool is_explicit() const { return !matchings_.empty(); }

    Matching matching(int index) const;            // index in [1, n-1]
    Edge edge(int matching_index, int slot) const; // slot in [0, n/2)
    int matching_of_edge(Edge e) const;

  private:
    explicit MatchingSet(int n) : n_(n) {}
    int n_ = 0;
    std::vector<Matching> matchings_;  // empty when implicit
};

struct ValidationReport {
    bool perfect = true;   // each matching covers every node exactly once
    bool disjoint = true;  // no edge appears in two matchings
    bool complete = true;  // the union is the full edge set of K_n
    std::vector<std::string> failures;
    bool ok() const { return perfect && disjoint && complete; }
};

ValidationReport validate_matching_set(const MatchingSet& ms);

}  // namespace matchsim
