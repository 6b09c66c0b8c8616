#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <map>
#include <vector>

#include "matchsim/coherent.hpp"
#include "matchsim/matchings.hpp"
#include "matchsim/runner.hpp"
#include "matchsim/stats.hpp"

using namespace matchsim;
namespace co = matchsim::coherent;

namespace {

co::ImperfectionModel lab_model() {
    // Lossy fiber-free bench: detector efficiency 0.25, visibility 0.988,
    // dark probability 2.3e-6 per detector per slot.
    co::ImperfectionModel m;
    m.eta_channel = 1.0;
    m.eta_det = 0.25;
    m.visibility = 0.988;
    m.p_dark = 2.3e-6;
    return m;
}

}  // namespace

TEST_SUITE_BEGIN("coherent");

TEST_CASE("click probabilities at reference points") {
    const auto zero = co::click_probabilities(0.0, 1000, co::ImperfectionModel::ideal());
    CHECK(zero.correct == 0.0);
    CHECK(zero.wrong == 0.0);

    const auto unit = co::click_probabilities(500.0, 1000, co::ImperfectionModel::ideal());
    CHECK(unit.correct == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    CHECK(unit.wrong == 0.0);

    const auto bench = co::click_probabilities(7.08, 1000, lab_model());
    CHECK(bench.correct == doctest::Approx(3.4915e-3).epsilon(1e-4));
    CHECK(bench.wrong == doctest::Approx(4.248e-5).epsilon(1e-4));
}

TEST_CASE("beam splitter intensities route by bit and reproduce click rates") {
    const auto model = lab_model();
    const auto out0 = co::beam_splitter_outputs(0, 7.08, 1000, model);
    const auto out1 = co::beam_splitter_outputs(1, 7.08, 1000, model);
    CHECK(out0.d0 == doctest::Approx(3.4976e-3).epsilon(1e-4));
    CHECK(out0.d1 == doctest::Approx(4.2480e-5).epsilon(1e-4));
    CHECK(out1.d0 == out0.d1);
    CHECK(out1.d1 == out0.d0);

    const auto p = co::click_probabilities(7.08, 1000, model);
    CHECK(-std::expm1(-out0.d0) == doctest::Approx(p.correct).epsilon(1e-12));
    CHECK(-std::expm1(-out0.d1) == doctest::Approx(p.wrong).epsilon(1e-12));

    co::ImperfectionModel perfect;
    const auto all0 = co::beam_splitter_outputs(0, 3.0, 10, perfect);
    CHECK(all0.d1 == 0.0);
    const auto all1 = co::beam_splitter_outputs(1, 3.0, 10, perfect);
    CHECK(all1.d0 == 0.0);
}

TEST_CASE("ideal HM error is half the no-click probability") {
    for (int n : {4, 100, 1000})
        for (double mu : {0.0, 0.5, 1.6094379124341003, 4.0, 12.0}) {
            const double got = co::hm_error_analytic(n, mu, co::ImperfectionModel::ideal());
            CHECK(got == doctest::Approx(0.5 * std::exp(-mu)).epsilon(1e-10));
        }
    // mu = ln 5 puts the ideal protocol exactly at the 10% target
    CHECK(co::hm_error_analytic(64, std::log(5.0), co::ImperfectionModel::ideal()) ==
          doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("degenerate parameters give a coin flip") {
    CHECK(co::hm_error_analytic(100, 0.0, lab_model()) == 0.5);
    CHECK(co::sm_error_analytic(100, 0.0, lab_model()) == 0.5);
    CHECK(co::sm_error_ideal(100, 0.0) == 0.5);
    // visibility 1/2 splits intensity evenly; no mu can help
    co::ImperfectionModel blind;
    blind.visibility = 0.5;
    for (double mu : {0.1, 1.0, 10.0, 100.0})
        CHECK(co::hm_error_analytic(100, mu, blind) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("ideal SM closed form") {
    CHECK(co::sm_error_ideal(2, 1.0) == doctest::Approx(0.3002118).epsilon(1e-6));
    for (int n : {2, 10, 100, 1000})
        for (double mu : {0.0, 0.3, 1.0, 4.0, 9.0}) {
            const double full = co::sm_error_analytic(n, mu, co::ImperfectionModel::ideal());
            const double ideal = co::sm_error_ideal(n, mu);
            CHECK(full == doctest::Approx(ideal).epsilon(1e-12));
        }
}

TEST_CASE("bench-point SM error") {
    co::ImperfectionModel m = lab_model();
    m.p_dark = 0.0;
    const double v = co::sm_error_analytic(1000, 7.08, m);
    CHECK(v == doctest::Approx(0.0865245).epsilon(1e-4));
    CHECK(std::abs(v - 0.0865) < 5e-4);
}

TEST_CASE("post-selected errors obey the one-of-two-wrong identity") {
    // Conditioned on producing an output, SM is wrong iff exactly one of its
    // two picked slots carries a wrong-detector click, so with r the HM
    // conditional error the SM conditional error is 2r(1-r).
    for (double visibility : {0.6, 0.9, 0.988, 1.0})
        for (double mu : {0.5, 4.0, 9.0}) {
            co::ImperfectionModel m;
            m.eta_det = 0.25;
            m.visibility = visibility;
            const double r = co::hm_error_post_selected(800, mu, m);
            const double s = co::sm_error_post_selected(800, mu, m);
            CHECK(s == doctest::Approx(2.0 * r * (1.0 - r)).epsilon(1e-12));
        }
    CHECK(co::hm_error_post_selected(100, 0.0, lab_model()) == 0.5);
    CHECK(co::sm_error_post_selected(100, 0.0, lab_model()) == 0.5);
}

TEST_CASE("analytic errors decrease with mu") {
    for (bool ideal : {true, false}) {
        const auto model = ideal ? co::ImperfectionModel::ideal() : lab_model();
        for (int n : {100, 1000}) {
            double prev_hm = 1.0;
            double prev_sm = 1.0;
            for (int i = 0; i <= 80; ++i) {
                const double mu = 20.0 * i / 80.0;
                const double hm = co::hm_error_analytic(n, mu, model);
                const double sm = co::sm_error_analytic(n, mu, model);
                CHECK(hm <= prev_hm + 1e-12);
                CHECK(sm <= prev_sm + 1e-12);
                prev_hm = hm;
                prev_sm = sm;
            }
        }
    }
}

TEST_CASE("dark count margin") {
    const auto near = co::dark_count_margin(1000, 7.08, lab_model());
    CHECK_FALSE(near.infinite);
    CHECK(near.ratio == doctest::Approx(1518.0).epsilon(0.01));
    CHECK(near.ratio >= 1000.0);

    const auto far = co::dark_count_margin(4000, 7.08, lab_model());
    CHECK(far.ratio >= 300.0);

    co::ImperfectionModel clean = lab_model();
    clean.p_dark = 0.0;
    CHECK(co::dark_count_margin(1000, 7.08, clean).infinite);
}

TEST_CASE("click trace membership and single-click extraction") {
    co::ClickTrace trace;
    trace.slot_count = 5;
    trace.d0_slots = {0, 1};
    trace.d1_slots = {1, 3};
    CHECK(trace.d0(0));
    CHECK_FALSE(trace.d1(0));
    CHECK(trace.d0(1));
    CHECK(trace.d1(1));
    CHECK_FALSE(trace.d0(4));
    // slot 1 fired both detectors and must not count as a single click
    const auto singles = trace.single_clicks();
    REQUIRE(singles.size() == 2);
    CHECK(singles[0] == std::pair<int, int>{0, 0});
    CHECK(singles[1] == std::pair<int, int>{3, 1});
}

TEST_CASE("HM decoding reads the clicked slot") {
    const auto ms = MatchingSet::build(8);
    const Matching m = ms.matching(3);
    Rng rng = make_stream(41, 0);

    co::ClickTrace trace;
    trace.slot_count = 4;
    trace.d1_slots = {2};
    const auto dec = co::decode_hm(trace, m, rng);
    CHECK_FALSE(dec.abstained);
    CHECK_FALSE(dec.outcome.guessed);
    CHECK(dec.outcome.edge == m.edges[2]);
    CHECK(dec.outcome.parity == 1);
    CHECK(dec.outcome.matching_index == 3);

    co::ClickTrace empty;
    empty.slot_count = 4;
    const auto guess = co::decode_hm(empty, m, rng);
    CHECK(guess.abstained);
    CHECK(guess.outcome.guessed);
    bool in_matching = false;
    for (const Edge& e : m.edges) in_matching |= (e == guess.outcome.edge);
    CHECK(in_matching);
}

TEST_CASE("SM decoding pairs two single clicks and XORs their labels") {
    Rng rng = make_stream(42, 0);
    co::ClickTrace trace;
    trace.slot_count = 4;
    trace.d1_slots = {0};
    trace.d0_slots = {2};
    const auto dec = co::decode_sm(trace, 4, rng);
    CHECK_FALSE(dec.abstained);
    CHECK(dec.outcome.edge == make_edge(1, 3));
    CHECK(dec.outcome.parity == 1);
    CHECK(dec.outcome.matching_index == matching_index_of_edge(4, make_edge(1, 3)));

    // a double click in between must be ignored
    co::ClickTrace mixed;
    mixed.slot_count = 4;
    mixed.d0_slots = {0, 1};
    mixed.d1_slots = {1, 2};
    const auto dec2 = co::decode_sm(mixed, 4, rng);
    CHECK_FALSE(dec2.abstained);
    CHECK(dec2.outcome.edge == make_edge(1, 3));
    CHECK(dec2.outcome.parity == 1);

    // one single click is not enough
    co::ClickTrace lone;
    lone.slot_count = 4;
    lone.d0_slots = {1};
    const auto dec3 = co::decode_sm(lone, 4, rng);
    CHECK(dec3.abstained);
    CHECK(dec3.outcome.guessed);
}

TEST_CASE("phase bit flips every detector label") {
    // With certain clicks and perfect visibility the trace is deterministic,
    // so flipping phi must exactly swap the detector roles.
    const int n = 8;
    const BitString x = BitString::parse("01101001");
    co::CoherentConfig cfg{n, 1e6, 0};
    co::ImperfectionModel ideal;
    Rng r0 = make_stream(43, 0);
    const auto rec0 = co::simulate_sm_run(x, cfg, ideal, r0);
    cfg.phi = 1;
    Rng r1 = make_stream(43, 1);
    const auto rec1 = co::simulate_sm_run(x, cfg, ideal, r1);
    CHECK(rec0.trace.d0_slots == rec1.trace.d1_slots);
    CHECK(rec0.trace.d1_slots == rec1.trace.d0_slots);
    CHECK_FALSE(rec0.abstained);
    CHECK(rec0.correct);
    CHECK(rec1.correct);
}

TEST_CASE("perfect visibility never yields a wrong answer") {
    const int n = 50;
    co::ImperfectionModel m;
    m.eta_det = 0.25;  // losses allowed, only the interference is perfect
    const auto ms = MatchingSet::build(n);
    Rng rng = make_stream(44, 0);
    int produced = 0;
    for (int t = 0; t < 3000; ++t) {
        const BitString x = BitString::random(n, rng);
        const co::CoherentConfig cfg{n, 5.0, std::nullopt};
        const int mi = 1 + static_cast<int>(uniform_index(rng, n - 1));
        const auto hm = co::simulate_hm_run(x, ms.matching(mi), cfg, m, rng);
        if (!hm.abstained) {
            ++produced;
            CHECK(hm.correct);
            CHECK(hm.outcome.parity == parity(x, hm.outcome.edge));
        }
        const auto sm = co::simulate_sm_run(x, cfg, m, rng);
        if (!sm.abstained) {
            ++produced;
            CHECK(sm.correct);
            CHECK(sm.outcome.parity == parity(x, sm.outcome.edge));
        }
    }
    CHECK(produced > 4000);
}

TEST_CASE("zero mean photon number always abstains") {
    const int n = 10;
    const auto ms = MatchingSet::build(n);
    Rng rng = make_stream(45, 0);
    for (int t = 0; t < 100; ++t) {
        const BitString x = BitString::random(n, rng);
        const co::CoherentConfig cfg{n, 0.0, std::nullopt};
        const auto hm = co::simulate_hm_run(x, ms.matching(1), cfg, lab_model(), rng);
        CHECK(hm.abstained);
        CHECK(hm.trace.d0_slots.empty());
        CHECK(hm.trace.d1_slots.empty());
        CHECK(co::simulate_sm_run(x, cfg, lab_model(), rng).abstained);
    }
}

TEST_CASE("saturated dark counts drown the signal") {
    co::ImperfectionModel drowned;
    drowned.p_dark = 1.0;
    Rng rng = make_stream(46, 0);
    const int n = 8;
    const BitString x = BitString::zeros(n);
    const co::CoherentConfig cfg{n, 50.0, std::nullopt};
    for (int t = 0; t < 50; ++t) {
        const auto rec = co::simulate_sm_run(x, cfg, drowned, rng, true);
        CHECK(rec.abstained);  // every slot double-clicks
        CHECK(rec.trace.single_clicks().empty());
    }
}

TEST_CASE("sampled matchings are uniform for a fixed input") {
    const int n = 20;
    const BitString x = BitString::parse("10110010101100101011");
    std::vector<std::uint64_t> counts(n - 1, 0);
    std::uint64_t kept = 0;
    const std::uint64_t trials = 20000;
    for (std::uint64_t t = 0; t < trials; ++t) {
        Rng stream = make_stream(47, t);
        const auto rec = co::simulate_sm_run(x, {n, 6.0, std::nullopt},
                                             co::ImperfectionModel::ideal(), stream);
        if (rec.abstained) continue;
        ++kept;
        counts[static_cast<std::size_t>(rec.outcome.matching_index - 1)]++;
    }
    CHECK(kept > 19000);
    const double stat = stats::chi_square_statistic(counts);
    CHECK(stats::chi_square_pvalue(stat, n - 2) > 0.001);
}

TEST_CASE("aggregation matches hand tallies and count-based stats") {
    const int n = 100;
    const double mu = 4.0;
    std::vector<co::RunRecord> records;
    Rng seq = make_stream(48, 0);
    std::uint64_t no_click = 0, wrong_click = 0, wrong_total = 0;
    for (int t = 0; t < 5000; ++t) {
        const BitString x = BitString::random(n, seq);
        records.push_back(co::simulate_sm_run(x, {n, mu, std::nullopt}, lab_model(), seq));
        const auto& r = records.back();
        if (r.abstained) ++no_click;
        if (!r.correct) {
            ++wrong_total;
            if (!r.abstained) ++wrong_click;
        }
    }
    const auto st = co::aggregate_runs(records, false);
    CHECK(st.runs == 5000);
    CHECK(st.runs_no_click == no_click);
    CHECK(st.runs_wrong_click == wrong_click);
    CHECK(st.runs_wrong_total == wrong_total);
    CHECK(st.mu_per_pulse == doctest::Approx(mu / n).epsilon(1e-12));
    CHECK(st.p_error ==
          doctest::Approx(static_cast<double>(wrong_total) / 5000.0).epsilon(1e-12));
    REQUIRE(st.p_error_post_defined);
    CHECK(st.p_error_post <= st.p_error);  // guessing on abstains can only hurt

    const auto from_counts = co::stats_from_counts(Protocol::kSamplingMatching, mu / n,
                                                   5000, no_click, wrong_click,
                                                   wrong_total, false);
    CHECK(from_counts.p_error == st.p_error);
    CHECK(from_counts.p_error_post == st.p_error_post);
    CHECK(from_counts.mu_post == st.mu_post);
}

TEST_CASE("published run-table arithmetic") {
    // (mu per pulse, runs, no-click runs, wrong single-click runs)
    const auto row1000 = co::stats_from_counts(Protocol::kSamplingMatching, 7.08e-3,
                                               848, 115, 26);
    CHECK(row1000.mu_post == doctest::Approx(6.12e-3).epsilon(1e-3));
    const auto row1500 = co::stats_from_counts(Protocol::kSamplingMatching, 4.72e-3,
                                               568, 68, 26);
    CHECK(row1500.mu_post == doctest::Approx(4.154e-3).epsilon(1e-3));
    const auto row3500 = co::stats_from_counts(Protocol::kSamplingMatching, 2.02e-3,
                                               272, 31, 7);
    REQUIRE(row3500.p_error_post_defined);
    CHECK(row3500.p_error_post == doctest::Approx(7.0 / 241.0).epsilon(1e-12));
    CHECK(std::abs(row3500.p_error_post - 0.03) < 0.015);
}

TEST_CASE("degenerate and inconsistent count inputs") {
    CHECK_THROWS_AS(co::aggregate_runs({}, false), std::invalid_argument);
    const auto all_abstain =
        co::stats_from_counts(Protocol::kHiddenMatching, 1e-3, 5, 5, 0);
    CHECK_FALSE(all_abstain.p_error_post_defined);
    CHECK(all_abstain.mu_post == 0.0);
    CHECK_THROWS_AS(co::stats_from_counts(Protocol::kHiddenMatching, 1e-3, 5, 2, 4),
                    std::invalid_argument);
    CHECK_THROWS_AS(co::stats_from_counts(Protocol::kHiddenMatching, 1e-3, 0, 0, 0),
                    std::invalid_argument);
    co::ImperfectionModel bad;
    bad.visibility = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("mixed batches are rejected") {
    Rng rng = make_stream(49, 0);
    const BitString x4 = BitString::random(4, rng);
    const BitString x6 = BitString::random(6, rng);
    std::vector<co::RunRecord> records;
    records.push_back(co::simulate_sm_run(x4, {4, 1.0, std::nullopt},
                                          co::ImperfectionModel::ideal(), rng));
    records.push_back(co::simulate_sm_run(x6, {6, 1.0, std::nullopt},
                                          co::ImperfectionModel::ideal(), rng));
    CHECK_THROWS_AS(co::aggregate_runs(records, false), std::invalid_argument);
}

TEST_CASE("small-scale Monte Carlo agrees with the closed forms") {
    const int n = 100;
    const double mu = 4.0;
    for (Protocol p : {Protocol::kHiddenMatching, Protocol::kSamplingMatching}) {
        runner::BatchConfig cfg;
        cfg.protocol = p;
        cfg.n = n;
        cfg.mu = mu;
        cfg.model = lab_model();
        cfg.model.p_dark = 0.0;
        cfg.trials = 20000;
        cfg.seed = 50;
        const auto result = runner::run_batch(cfg);
        const double expected = p == Protocol::kHiddenMatching
                                    ? co::hm_error_analytic(n, mu, cfg.model)
                                    : co::sm_error_analytic(n, mu, cfg.model);
        CHECK(stats::score_z(result.stats.runs_wrong_total, cfg.trials, expected) < 4.0);
    }
}

TEST_SUITE_END();

// Full analytic-vs-Monte-Carlo sweep. Slow; registered as its own test so the
// quick suites stay quick.
TEST_SUITE_BEGIN("coherent_grid");

TEST_CASE("error frequencies match closed forms across the (n, mu, model) grid") {
    std::uint64_t seed = 20250815;
    for (int n : {100, 1000, 4000})
        for (double mu : {1.0, 4.0, 8.0})
            for (bool ideal : {true, false}) {
                co::ImperfectionModel model =
                    ideal ? co::ImperfectionModel::ideal() : lab_model();
                model.p_dark = 0.0;
                for (Protocol p : {Protocol::kHiddenMatching, Protocol::kSamplingMatching}) {
                    runner::BatchConfig cfg;
                    cfg.protocol = p;
                    cfg.n = n;
                    cfg.mu = mu;
                    cfg.model = model;
                    cfg.trials = 100000;
                    cfg.seed = ++seed;
                    const auto result = runner::run_batch(cfg);
                    const double expected =
                        p == Protocol::kHiddenMatching
                            ? co::hm_error_analytic(n, mu, model)
                            : co::sm_error_analytic(n, mu, model);
                    INFO("n=", n, " mu=", mu, " ideal=", ideal,
                         " protocol=", to_string(p));
                    CHECK(stats::score_z(result.stats.runs_wrong_total, cfg.trials,
                                         expected) < 4.0);
                }
            }
}

TEST_SUITE_END();
