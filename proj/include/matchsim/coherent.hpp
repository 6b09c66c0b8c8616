#pragma once
// Coherent-state implementations of the matching protocols.
//
// Alice encodes x in the phases of a train of weak pulses with total mean
// photon number mu (mu/n per pulse). Bob interferes consecutive pulses (HM:
// the two pulses of each edge of his matching; SM: each pulse against a local
// reference carrying Alice's extra phase bit phi), so per slot the correct
// detector fires with p_c = 1 - exp(-2 eta nu mu / n) and the wrong one with
// p_w = 1 - exp(-2 eta (1 - nu) mu / n), where eta = eta_channel * eta_det
// and nu is the interference visibility. Detection events at the two
// detectors are independent; dark counts, when enabled, OR onto each detector
// with probability p_dark per slot and are excluded from the closed forms.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "matchsim/protocol.hpp"

namespace matchsim::coherent {

struct ImperfectionModel {
    double eta_channel = 1.0;
    double eta_det = 1.0;
    double visibility = 1.0;
    double p_dark = 0.0;

    double eta() const { return eta_channel * eta_det; }
    static ImperfectionModel ideal() { return {}; }
    void validate() const;  // throws std::invalid_argument outside [0, 1]
};

struct CoherentConfig {
    int n = 0;
    double mu = 0.0;
    // SM only: Alice's extra phase bit; drawn uniformly per run when unset.
    std::optional<int> phi;
};

struct ClickProbabilities {
    double correct = 0.0;
    double wrong = 0.0;
};

ClickProbabilities click_probabilities(double mu, int n, const ImperfectionModel& model);

struct DetectorIntensities {
    double d0 = 0.0;
    double d1 = 0.0;
};

// Mean photon numbers leaving the interferometer for one slot whose encoded
// bit routes the signal to detector `bit`.
DetectorIntensities beam_splitter_outputs(int bit, double mu, int n,
                                          const ImperfectionModel& model);

// Closed-form error probabilities. HM: with p_1 the single-click probability
// per slot, p_not1 = (1 - p_1)^{n/2} and p_1w = p_w(1-p_c)/p_1,
//   p_error = 1/2 p_not1 + (1 - p_not1) p_1w.
// SM needs two single-click slots: p_not11 = (1-p_1)^n + n p_1 (1-p_1)^{n-1}
// and p_11w = 2 p_c(1-p_w) p_w(1-p_c) / p_1^2,
//   p_error = 1/2 p_not11 + (1 - p_not11) p_11w.
double hm_error_analytic(int n, double mu, const ImperfectionModel& model);
double sm_error_analytic(int n, double mu, const ImperfectionModel& model);

// Lossless, unit-visibility SM error 1/2 [exp(-2 mu) + n p_c (1-p_c)^{n-1}]
// with p_c = 1 - exp(-2 mu / n); equals sm_error_analytic on the ideal model.
double sm_error_ideal(int n, double mu);

// Error conditioned on the protocol producing an output (abstains dropped):
// the wrong-branch probabilities p_1w and p_11w alone. Defined as 1/2 at
// mu = 0 where the conditioning event has probability zero.
double hm_error_post_selected(int n, double mu, const ImperfectionModel& model);
double sm_error_post_selected(int n, double mu, const ImperfectionModel& model);

// Signal-to-dark-count headroom p_c / p_dark.
struct DarkCountMargin {
    double ratio = 0.0;
    bool infinite = false;  // p_dark == 0
};
DarkCountMargin dark_count_margin(int n, double mu, const ImperfectionModel& model);

// Detection record of one run. Slots are 0-based; HM has n/2 slots (one per
// edge of Bob's matching, in matching order), SM has n (one per position).
// Storage is sparse: just the slots where each detector clicked.
struct ClickTrace {
    int slot_count = 0;
    std::vector<int> d0_slots;  // ascending
    std::vector<int> d1_slots;  // ascending

    bool d0(int slot) const;
    bool d1(int slot) const;
    // Slots where exactly one detector clicked, with the detector label.
    std::vector<std::pair<int, int>> single_clicks() const;
    friend bool operator==(const ClickTrace&, const ClickTrace&) = default;
};

struct RunRecord {
    Protocol protocol = Protocol::kHiddenMatching;
    int n = 0;
    double mu = 0.0;
    std::optional<int> phi;  // SM only
    BitString x;
    ClickTrace trace;
    // On abstained runs the outcome is the fair random guess; post-selected
    // aggregation ignores it.
    ProtocolOutcome outcome;
    bool abstained = false;
    bool correct = false;
};

struct Decoded {
    ProtocolOutcome outcome;
    bool abstained = false;
};

// Bob's inference alone, reusable for replay and forced-trace tests.
// HM: pick a uniformly random single-click slot, report its edge with parity
// = detector label; no single click -> abstain and guess a uniform edge of m
// with a fair coin.
Decoded decode_hm(const ClickTrace& trace, const Matching& m, Rng& rng);
// SM: pick two distinct single-click slots uniformly, report edge (k, l) with
// parity = XOR of the two detector labels (Alice's phi cancels) and the
// matching that edge belongs to; fewer than two single clicks -> abstain and
// guess a uniform edge of a uniform matching with a fair coin.
Decoded decode_sm(const ClickTrace& trace, int n, Rng& rng);

RunRecord simulate_hm_run(const BitString& x, const Matching& m,
                          const CoherentConfig& config, const ImperfectionModel& model,
                          Rng& rng, bool include_dark = false);
RunRecord simulate_sm_run(const BitString& x, const CoherentConfig& config,
                          const ImperfectionModel& model, Rng& rng,
                          bool include_dark = false);

struct RunStats {
    Protocol protocol = Protocol::kHiddenMatching;
    std::uint64_t runs = 0;
    std::uint64_t runs_no_click = 0;     // abstained
    std::uint64_t runs_wrong_click = 0;  // wrong outputs among click-bearing runs
    std::uint64_t runs_wrong_total = 0;  // wrong outputs including abstain guesses
    double mu_per_pulse = 0.0;
    double p_error = 0.0;       // runs_wrong_total / runs
    double p_error_post = 0.0;  // runs_wrong_click / (runs - runs_no_click)
    bool p_error_post_defined = false;
    double mu_post = 0.0;  // mu_per_pulse * (runs - runs_no_click) / runs
    // Headline error under the aggregation mode this was built with.
    bool post_selected = false;
    double headline_error() const { return post_selected ? p_error_post : p_error; }
};

// Requires a non-empty batch with identical protocol, n and mu throughout.
RunStats aggregate_runs(std::span<const RunRecord> records, bool post_select = false);

// Same arithmetic from bare counts (no record log available). p_error and
// runs_wrong_total are only populated when wrong_total is supplied.
RunStats stats_from_counts(Protocol protocol, double mu_per_pulse, std::uint64_t runs,
                           std::uint64_t runs_no_click, std::uint64_t runs_wrong_click,
                           std::optional<std::uint64_t> wrong_total = std::nullopt,
                           bool post_select = false);

}  // namespace matchsim::coherent
