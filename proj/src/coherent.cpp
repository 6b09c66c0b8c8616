#include "matchsim/coherent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace matchsim::coherent {

namespace {

void check_config(int n, double mu) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("n must be even, >= 2, got " + std::to_string(n));
    if (!(mu >= 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("mu must be finite and >= 0");
}

struct SlotModel {
    double p_c = 0.0;       // correct-detector click
    double p_w = 0.0;       // wrong-detector click
    double p_1 = 0.0;       // exactly one click
    double p_none = 0.0;    // no click, exact complement form
    // One uniform decides the slot: [0, t_both) both, [t_both, p_c) correct
    // only, [p_c, t_single_end) wrong only, rest none. The cut points are
    // exact: t_both + p_c (1 - p_w) = p_c.
    double t_both = 0.0;
    double t_single_end = 0.0;
};

SlotModel slot_model(double mu, int n, const ImperfectionModel& model) {
    const auto cp = click_probabilities(mu, n, model);
    SlotModel s;
    s.p_c = cp.correct;
    s.p_w = cp.wrong;
    s.p_1 = s.p_c * (1.0 - s.p_w) + s.p_w * (1.0 - s.p_c);
    // (1-p_c)(1-p_w) = exp(-2 eta mu / n) exactly, so build 1 - p_1 from it
    // to keep tiny probabilities accurate.
    const double rate_total = 2.0 * model.eta() * mu / static_cast<double>(n);
    s.p_none = std::exp(-rate_total);
    s.t_both = s.p_c * s.p_w;
    s.t_single_end = s.p_c + s.p_w * (1.0 - s.p_c);
    return s;
}

// log(1 - p_1) computed through the exact complement p_none + p_c p_w.
double log_one_minus_p1(const SlotModel& s) {
    return std::log(s.p_none + s.t_both);
}

int single_click_outcome(const SlotModel& s, double u) {
    // 0 = both, 1 = correct only, 2 = wrong only, 3 = none
    if (u < s.t_both) return 0;
    if (u < s.p_c) return 1;
    if (u < s.t_single_end) return 2;
    return 3;
}

void append_click(std::vector<int>& v, int slot) { v.push_back(slot); }

// Fills one slot of the trace given the encoded bit that routes the signal.
void simulate_slot(const SlotModel& s, int correct_detector, int slot,
                   const ImperfectionModel& model, bool include_dark, Rng& rng,
                   ClickTrace& trace) {
    const int outcome = single_click_outcome(s, uniform01(rng));
    bool clicked[2] = {false, false};
    if (outcome == 0) {
        clicked[0] = clicked[1] = true;
    } else if (outcome == 1) {
        clicked[correct_detector] = true;
    } else if (outcome == 2) {
        clicked[1 - correct_detector] = true;
    }
    if (include_dark) {
        // Dark counts OR onto each detector; both uniforms are always drawn
        // so the stream layout does not depend on earlier outcomes.
        const bool dark0 = bernoulli(rng, model.p_dark);
        const bool dark1 = bernoulli(rng, model.p_dark);
        clicked[0] = clicked[0] || dark0;
        clicked[1] = clicked[1] || dark1;
    }
    if (clicked[0]) append_click(trace.d0_slots, slot);
    if (clicked[1]) append_click(trace.d1_slots, slot);
}

}  // namespace

void ImperfectionModel::validate() const {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(eta_channel) || !in_unit(eta_det) || !in_unit(visibility) ||
        !in_unit(p_dark))
        throw std::invalid_argument(
            "imperfection parameters must lie in [0, 1]: eta_channel=" +
            std::to_string(eta_channel) + " eta_det=" + std::to_string(eta_det) +
            " visibility=" + std::to_string(visibility) +
            " p_dark=" + std::to_string(p_dark));
}

ClickProbabilities click_probabilities(double mu, int n, const ImperfectionModel& model) {
    model.validate();
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(mu >= 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("mu must be finite and >= 0");
    const double per_slot = 2.0 * model.eta() * mu / static_cast<double>(n);
    ClickProbabilities cp;
    cp.correct = -std::expm1(-per_slot * model.visibility);
    cp.wrong = -std::expm1(-per_slot * (1.0 - model.visibility));
    return cp;
}

DetectorIntensities beam_splitter_outputs(int bit, double mu, int n,
                                          const ImperfectionModel& model) {
    model.validate();
    if (bit != 0 && bit != 1) throw std::invalid_argument("bit must be 0 or 1");
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(mu >= 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("mu must be finite and >= 0");
    const double per_slot = 2.0 * model.eta() * mu / static_cast<double>(n);
    const double bright = per_slot * model.visibility;
    const double dim = per_slot * (1.0 - model.visibility);
    return bit == 0 ? DetectorIntensities{bright, dim} : DetectorIntensities{dim, bright};
}

double hm_error_analytic(int n, double mu, const ImperfectionModel& model) {
    check_config(n, mu);
    const SlotModel s = slot_model(mu, n, model);
    if (s.p_1 <= 0.0) return 0.5;  // never any usable click
    const double p_not1 = std::exp(static_cast<double>(n / 2) * log_one_minus_p1(s));
    const double p_1w = s.p_w * (1.0 - s.p_c) / s.p_1;
    return 0.5 * p_not1 + (1.0 - p_not1) * p_1w;
}

double sm_error_analytic(int n, double mu, const ImperfectionModel& model) {
    check_config(n, mu);
    const SlotModel s = slot_model(mu, n, model);
    if (s.p_1 <= 0.0) return 0.5;
    const double log1m = log_one_minus_p1(s);
    const double none = std::exp(static_cast<double>(n) * log1m);
    const double one = static_cast<double>(n) * s.p_1 *
                       std::exp(static_cast<double>(n - 1) * log1m);
    const double p_not11 = none + one;
    const double r_w = s.p_w * (1.0 - s.p_c) / s.p_1;
    const double r_c = s.p_c * (1.0 - s.p_w) / s.p_1;
    const double p_11w = 2.0 * r_c * r_w;
    return 0.5 * p_not11 + (1.0 - p_not11) * p_11w;
}

double sm_error_ideal(int n, double mu) {
    check_config(n, mu);
    const double p_c = -std::expm1(-2.0 * mu / static_cast<double>(n));
    const double none = std::exp(-2.0 * mu);
    const double one = static_cast<double>(n) * p_c *
                       std::exp(static_cast<double>(n - 1) * std::log1p(-p_c));
    return 0.5 * (none + one);
}

double hm_error_post_selected(int n, double mu, const ImperfectionModel& model) {
    check_config(n, mu);
    const SlotModel s = slot_model(mu, n, model);
    if (s.p_1 <= 0.0) return 0.5;  // conditioning event has probability zero
    return s.p_w * (1.0 - s.p_c) / s.p_1;
}

double sm_error_post_selected(int n, double mu, const ImperfectionModel& model) {
    check_config(n, mu);
    const SlotModel s = slot_model(mu, n, model);
    if (s.p_1 <= 0.0) return 0.5;
    const double r_w = s.p_w * (1.0 - s.p_c) / s.p_1;
    const double r_c = s.p_c * (1.0 - s.p_w) / s.p_1;
    return 2.0 * r_c * r_w;
}

DarkCountMargin dark_count_margin(int n, double mu, const ImperfectionModel& model) {
    const auto cp = click_probabilities(mu, n, model);
    if (model.p_dark == 0.0)
        return {std::numeric_limits<double>::infinity(), true};
    return {cp.correct / model.p_dark, false};
}

bool ClickTrace::d0(int slot) const {
    return std::binary_search(d0_slots.begin(), d0_slots.end(), slot);
}

bool ClickTrace::d1(int slot) const {
    return std::binary_search(d1_slots.begin(), d1_slots.end(), slot);
}

std::vector<std::pair<int, int>> ClickTrace::single_clicks() const {
    std::vector<std::pair<int, int>> out;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < d0_slots.size() || j < d1_slots.size()) {
        if (j == d1_slots.size() || (i < d0_slots.size() && d0_slots[i] < d1_slots[j])) {
            out.emplace_back(d0_slots[i], 0);
            ++i;
        } else if (i == d0_slots.size() || d1_slots[j] < d0_slots[i]) {
            out.emplace_back(d1_slots[j], 1);
            ++j;
        } else {  // double click
            ++i;
            ++j;
        }
    }
    return out;
}

Decoded decode_hm(const ClickTrace& trace, const Matching& m, Rng& rng) {
    const auto singles = trace.single_clicks();
    if (static_cast<int>(m.edges.size()) != trace.slot_count)
        throw std::invalid_argument("trace has " + std::to_string(trace.slot_count) +
                                    " slots but matching has " +
                                    std::to_string(m.edges.size()) + " edges");
    if (singles.empty()) {
        const auto pick = uniform_index(rng, m.edges.size());
        const int coin = static_cast<int>(uniform_index(rng, 2));
        return {ProtocolOutcome{m.edges[static_cast<std::size_t>(pick)], m.index, coin,
                                true},
                true};
    }
    const auto& [slot, label] = singles[static_cast<std::size_t>(
        uniform_index(rng, singles.size()))];
    return {ProtocolOutcome{m.edges[static_cast<std::size_t>(slot)], m.index, label,
                            false},
            false};
}

Decoded decode_sm(const ClickTrace& trace, int n, Rng& rng) {
    if (trace.slot_count != n)
        throw std::invalid_argument("SM trace must have one slot per position");
    const auto singles = trace.single_clicks();
    if (singles.size() < 2) {
        const int index =
            1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n - 1)));
        const int slot =
            static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n / 2)));
        const Edge e = matching_edge(n, index, slot);
        const int coin = static_cast<int>(uniform_index(rng, 2));
        return {ProtocolOutcome{e, index, coin, true}, true};
    }
    // Uniform unordered pair via two draws.
    const auto a = uniform_index(rng, singles.size());
    auto b = uniform_index(rng, singles.size() - 1);
    if (b >= a) ++b;
    const auto& first = singles[static_cast<std::size_t>(std::min(a, b))];
    const auto& second = singles[static_cast<std::size_t>(std::max(a, b))];
    const Edge e = make_edge(first.first + 1, second.first + 1);
    const int par = first.second ^ second.second;
    return {ProtocolOutcome{e, matching_index_of_edge(n, e), par, false}, false};
}

RunRecord simulate_hm_run(const BitString& x, const Matching& m,
                          const CoherentConfig& config, const ImperfectionModel& model,
                          Rng& rng, bool include_dark) {
    check_config(config.n, config.mu);
    if (x.size() != config.n)
        throw std::invalid_argument("|x| does not match n");
    if (static_cast<int>(m.edges.size()) != config.n / 2)
        throw std::invalid_argument("matching does not fit n");
    const SlotModel s = slot_model(config.mu, config.n, model);

    RunRecord rec;
    rec.protocol = Protocol::kHiddenMatching;
    rec.n = config.n;
    rec.mu = config.mu;
    rec.x = x;
    rec.trace.slot_count = config.n / 2;
    for (int slot = 0; slot < config.n / 2; ++slot) {
        const Edge e = m.edges[static_cast<std::size_t>(slot)];
        simulate_slot(s, parity(x, e), slot, model, include_dark, rng, rec.trace);
    }
    const Decoded decoded = decode_hm(rec.trace, m, rng);
    rec.outcome = decoded.outcome;
    rec.abstained = decoded.abstained;
    rec.correct = decoded.outcome.parity == parity(x, decoded.outcome.edge);
    return rec;
}

RunRecord simulate_sm_run(const BitString& x, const CoherentConfig& config,
                          const ImperfectionModel& model, Rng& rng,
                          bool include_dark) {
    check_config(config.n, config.mu);
    if (x.size() != config.n)
        throw std::invalid_argument("|x| does not match n");
    if (config.phi && *config.phi != 0 && *config.phi != 1)
        throw std::invalid_argument("phi must be 0 or 1");
    const SlotModel s = slot_model(config.mu, config.n, model);

    RunRecord rec;
    rec.protocol = Protocol::kSamplingMatching;
    rec.n = config.n;
    rec.mu = config.mu;
    rec.x = x;
    // phi is drawn before any slot so forcing it does not shift the stream
    // consumed by the slots.
    const int phi =
        config.phi ? *config.phi : static_cast<int>(uniform_index(rng, 2));
    rec.phi = phi;
    rec.trace.slot_count = config.n;
    for (int slot = 0; slot < config.n; ++slot) {
        const int correct_detector = x.bit(slot) ^ phi;
        simulate_slot(s, correct_detector, slot, model, include_dark, rng, rec.trace);
    }
    const Decoded decoded = decode_sm(rec.trace, config.n, rng);
    rec.outcome = decoded.outcome;
    rec.abstained = decoded.abstained;
    rec.correct = decoded.outcome.parity == parity(x, decoded.outcome.edge);
    return rec;
}

RunStats aggregate_runs(std::span<const RunRecord> records, bool post_select) {
    if (records.empty())
        throw std::invalid_argument("cannot aggregate an empty batch");
    const RunRecord& head = records.front();
    std::uint64_t no_click = 0;
    std::uint64_t wrong_click = 0;
    std::uint64_t wrong_total = 0;
    for (const RunRecord& r : records) {
        if (r.protocol != head.protocol || r.n != head.n || r.mu != head.mu)
            throw std::invalid_argument("mixed batch: protocol/n/mu must match");
        if (r.abstained) ++no_click;
        if (!r.correct) {
            ++wrong_total;
            if (!r.abstained) ++wrong_click;
        }
    }
    return stats_from_counts(head.protocol, head.mu / static_cast<double>(head.n),
                             records.size(), no_click, wrong_click, wrong_total,
                             post_select);
}

RunStats stats_from_counts(Protocol protocol, double mu_per_pulse, std::uint64_t runs,
                           std::uint64_t runs_no_click, std::uint64_t runs_wrong_click,
                           std::optional<std::uint64_t> wrong_total, bool post_select) {
    if (runs == 0) throw std::invalid_argument("runs must be positive");
    if (runs_no_click > runs || runs_wrong_click > runs - runs_no_click)
        throw std::invalid_argument("inconsistent counts");
    RunStats st;
    st.protocol = protocol;
    st.runs = runs;
    st.runs_no_click = runs_no_click;
    st.runs_wrong_click = runs_wrong_click;
    st.mu_per_pulse = mu_per_pulse;
    st.post_selected = post_select;
    const auto clicked = runs - runs_no_click;
    if (clicked > 0) {
        st.p_error_post =
            static_cast<double>(runs_wrong_click) / static_cast<double>(clicked);
        st.p_error_post_defined = true;
    }
    st.mu_post =
        mu_per_pulse * static_cast<double>(clicked) / static_cast<double>(runs);
    if (wrong_total) {
        if (*wrong_total > runs || *wrong_total < runs_wrong_click)
            throw std::invalid_argument("inconsistent wrong_total");
        st.runs_wrong_total = *wrong_total;
        st.p_error = static_cast<double>(*wrong_total) / static_cast<double>(runs);
    }
    return st;
}

}  // namespace matchsim::coherent
