#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <set>

#include "matchsim/matchings.hpp"

using namespace matchsim;

namespace {

// Order-insensitive view of a matching for set comparisons.
std::set<Edge> edge_set(const Matching& m) {
    return std::set<Edge>(m.edges.begin(), m.edges.end());
}

}  // namespace

TEST_SUITE_BEGIN("matchings");

TEST_CASE("make_edge normalizes and validates") {
    CHECK(make_edge(3, 1) == Edge{1, 3});
    CHECK(make_edge(1, 3) == Edge{1, 3});
    CHECK_THROWS_AS(make_edge(2, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_edge(0, 1), std::invalid_argument);
}

TEST_CASE("n=2 family is the single edge") {
    const auto ms = MatchingSet::build(2);
    REQUIRE(ms.size() == 1);
    const auto m = ms.matching(1);
    REQUIRE(m.edges.size() == 1);
    CHECK(m.edges[0] == Edge{1, 2});
    CHECK(ms.matching_of_edge(Edge{1, 2}) == 1);
}

TEST_CASE("n=4 family matches the conventional order") {
    const auto ms = MatchingSet::build(4);
    REQUIRE(ms.size() == 3);
    CHECK(edge_set(ms.matching(1)) == std::set<Edge>{{1, 2}, {3, 4}});
    CHECK(edge_set(ms.matching(2)) == std::set<Edge>{{1, 3}, {2, 4}});
    CHECK(edge_set(ms.matching(3)) == std::set<Edge>{{1, 4}, {2, 3}});
}

TEST_CASE("matching_of_edge pins the family indexing") {
    const auto ms = MatchingSet::build(4);
    CHECK(ms.matching_of_edge(Edge{1, 3}) == 2);
    CHECK(ms.matching_of_edge(Edge{3, 4}) == 1);
    CHECK(ms.matching_of_edge(Edge{3, 1}) == 2);  // unnormalized input ok
}

TEST_CASE("n=8 family partitions all 28 edges") {
    // Independent oracle: count every edge across the family directly.
    const auto ms = MatchingSet::build(8);
    REQUIRE(ms.size() == 7);
    std::set<Edge> all;
    for (int i = 1; i <= 7; ++i) {
        const auto m = ms.matching(i);
        REQUIRE(m.edges.size() == 4);
        std::set<int> nodes;
        for (const Edge& e : m.edges) {
            nodes.insert(e.k);
            nodes.insert(e.l);
            CHECK(all.insert(e).second);  // never seen in an earlier matching
        }
        CHECK(nodes.size() == 8);
    }
    CHECK(all.size() == 28);
}

TEST_CASE("matching_of_edge hits every index n/2 times at n=8") {
    const auto ms = MatchingSet::build(8);
    std::vector<int> hits(8, 0);
    for (int k = 1; k <= 8; ++k)
        for (int l = k + 1; l <= 8; ++l) {
            const int idx = ms.matching_of_edge(Edge{k, l});
            REQUIRE(idx >= 1);
            REQUIRE(idx <= 7);
            ++hits[static_cast<std::size_t>(idx)];
        }
    for (int i = 1; i <= 7; ++i) CHECK(hits[static_cast<std::size_t>(i)] == 4);
}

TEST_CASE("membership is consistent with matching_of_edge") {
    for (int n : {2, 4, 6, 10, 16, 30}) {
        const auto ms = MatchingSet::build(n);
        for (int i = 1; i <= ms.size(); ++i)
            for (const Edge& e : ms.matching(i).edges)
                CHECK(ms.matching_of_edge(e) == i);
    }
}

TEST_CASE("every even n in [2, 128] validates") {
    for (int n = 2; n <= 128; n += 2) {
        const auto ms = MatchingSet::build(n, MatchingSet::Storage::kImplicit);
        const auto report = validate_matching_set(ms);
        CAPTURE(n);
        CHECK(report.ok());
        CHECK(report.failures.empty());
    }
}

TEST_CASE("explicit and implicit representations agree") {
    const int n = 96;
    const auto ex = MatchingSet::build(n, MatchingSet::Storage::kExplicit);
    const auto im = MatchingSet::build(n, MatchingSet::Storage::kImplicit);
    REQUIRE(ex.is_explicit());
    REQUIRE(!im.is_explicit());
    for (int i = 1; i <= n - 1; ++i) {
        CHECK(ex.matching(i).edges == im.matching(i).edges);
        for (int slot = 0; slot < n / 2; ++slot)
            CHECK(ex.edge(i, slot) == im.edge(i, slot));
    }
    for (int k = 1; k <= n; ++k)
        for (int l = k + 1; l <= n; ++l)
            CHECK(ex.matching_of_edge(Edge{k, l}) == im.matching_of_edge(Edge{k, l}));
}

TEST_CASE("construction is deterministic") {
    const auto a = MatchingSet::build(32);
    const auto b = MatchingSet::build(32);
    for (int i = 1; i <= 31; ++i) CHECK(a.matching(i).edges == b.matching(i).edges);
}

TEST_CASE("validation flags broken families") {
    // duplicate edge across matchings
    std::vector<Matching> dup = {
        {1, {Edge{1, 2}, Edge{3, 4}}},
        {2, {Edge{1, 2}, Edge{3, 4}}},
    };
    const auto dup_report = validate_matching_set(MatchingSet(4, std::move(dup)));
    CHECK(!dup_report.disjoint);
    CHECK(!dup_report.ok());

    // node covered twice inside one matching
    std::vector<Matching> bad_cover = {
        {1, {Edge{1, 2}, Edge{2, 3}}},
    };
    const auto cover_report = validate_matching_set(MatchingSet(4, std::move(bad_cover)));
    CHECK(!cover_report.perfect);

    // valid matchings but missing coverage of K_4
    std::vector<Matching> partial = {
        {1, {Edge{1, 2}, Edge{3, 4}}},
        {2, {Edge{1, 3}, Edge{2, 4}}},
    };
    const auto partial_report = validate_matching_set(MatchingSet(4, std::move(partial)));
    CHECK(partial_report.perfect);
    CHECK(partial_report.disjoint);
    CHECK(!partial_report.complete);
}

TEST_CASE("invalid arguments are rejected") {
    CHECK_THROWS_AS(MatchingSet::build(3), std::invalid_argument);
    CHECK_THROWS_AS(MatchingSet::build(0), std::invalid_argument);
    const auto ms = MatchingSet::build(4);
    CHECK_THROWS_AS(ms.matching(0), std::invalid_argument);
    CHECK_THROWS_AS(ms.matching(4), std::invalid_argument);
    CHECK_THROWS_AS(ms.matching_of_edge(Edge{1, 5}), std::invalid_argument);
    CHECK_THROWS_AS(ms.matching_of_edge(Edge{2, 2}), std::invalid_argument);
    CHECK_THROWS_AS(matching_edge(8, 1, 4), std::invalid_argument);
}

TEST_SUITE_END();
