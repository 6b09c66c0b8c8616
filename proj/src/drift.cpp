#include "matchsim/drift.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace matchsim::drift {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double fringe_visibility(double residual) {
    const double c = std::cos(0.5 * residual);
    return c * c;
}

// Intensity at ramp angle theta for residual phase delta, before noise.
double ramp_intensity(double theta, double delta) {
    return 0.5 * (1.0 + std::cos(theta + delta));
}

}  // namespace

void BlockLayout::validate() const {
    if (block_size <= 0 || protocol_pulses <= 0 || alice_track <= 0 || bob_track <= 0)
        throw std::invalid_argument("block segments must be positive");
    if (protocol_pulses + alice_track + bob_track != block_size)
        throw std::invalid_argument(
            "segments must tile the block: " + std::to_string(protocol_pulses) + " + " +
            std::to_string(alice_track) + " + " + std::to_string(bob_track) +
            " != " + std::to_string(block_size));
}

std::vector<double> simulate_phase_walk(int num_pulses, const DriftModel& model,
                                        Rng& rng) {
    if (num_pulses < 1) throw std::invalid_argument("num_pulses must be >= 1");
    if (!(model.sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
    std::vector<double> walk(static_cast<std::size_t>(num_pulses));
    NormalSampler gauss;
    double phase = 0.0;
    walk[0] = 0.0;
    for (int t = 1; t < num_pulses; ++t) {
        phase += model.sigma * gauss(rng);
        walk[static_cast<std::size_t>(t)] = phase;
    }
    return walk;
}

std::vector<double> ramp_calibration_samples(double true_phase, int count,
                                             const DriftModel& model, Rng& rng) {
    if (count < 2) throw std::invalid_argument("need at least 2 ramp samples");
    std::vector<double> samples(static_cast<std::size_t>(count));
    NormalSampler gauss;
    for (int t = 0; t < count; ++t) {
        const double theta = kTwoPi * static_cast<double>(t) / static_cast<double>(count);
        double v = ramp_intensity(theta, true_phase);
        if (model.intensity_noise > 0.0)
            v *= 1.0 + model.intensity_noise * gauss(rng);
        samples[static_cast<std::size_t>(t)] = v;
    }
    return samples;
}

PhaseFit fit_phase(std::span<const double> samples) {
    const std::size_t count = samples.size();
    if (count < 2) throw degenerate_fit_error("too few samples to fit a phase");
    // First DFT bin: for I_t = m + (A/2) cos(theta_t + delta) the coefficient
    // sum_t I_t e^{-i theta_t} equals (count A / 4) e^{i delta}.
    double re = 0.0;
    double im = 0.0;
    double total = 0.0;
    for (std::size_t t = 0; t < count; ++t) {
        const double theta = kTwoPi * static_cast<double>(t) / static_cast<double>(count);
        re += samples[t] * std::cos(theta);
        im -= samples[t] * std::sin(theta);
        total += samples[t];
    }
    const double norm = std::hypot(re, im);
    const double scale = static_cast<double>(count) / 4.0;
    if (!(norm > 1e-12 * (std::abs(total) + 1.0)))
        throw degenerate_fit_error("no first-harmonic content in calibration samples");
    PhaseFit fit;
    fit.phase = std::atan2(im, re);
    fit.amplitude = norm / scale;
    const double mean = total / static_cast<double>(count);
    double ss = 0.0;
    for (std::size_t t = 0; t < count; ++t) {
        const double theta = kTwoPi * static_cast<double>(t) / static_cast<double>(count);
        const double fitted =
            mean + 0.5 * fit.amplitude * std::cos(theta + fit.phase);
        ss += (samples[t] - fitted) * (samples[t] - fitted);
    }
    fit.residual_rms = std::sqrt(ss / static_cast<double>(count));
    return fit;
}

DriftReport run_blocks(int num_blocks, const BlockLayout& layout,
                       const DriftModel& model, Rng& rng) {
    if (num_blocks < 1) throw std::invalid_argument("num_blocks must be >= 1");
    layout.validate();
    if (!(model.sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");

    DriftReport report;
    report.blocks.reserve(static_cast<std::size_t>(num_blocks));
    NormalSampler gauss;
    double phase = 0.0;
    double correction = 0.0;
    double corr_sum = 0.0;
    double unc_sum = 0.0;
    std::vector<double> samples(static_cast<std::size_t>(layout.alice_track));

    // Runs one tracking segment in place: the walk keeps moving while the
    // ramp sweeps, and each sample reads the residual at its own pulse.
    const auto track_segment = [&](int count) {
        samples.resize(static_cast<std::size_t>(count));
        for (int t = 0; t < count; ++t) {
            phase += model.sigma * gauss(rng);
            const double theta =
                kTwoPi * static_cast<double>(t) / static_cast<double>(count);
            double v = ramp_intensity(theta, phase - correction);
            if (model.intensity_noise > 0.0)
                v *= 1.0 + model.intensity_noise * gauss(rng);
            samples[static_cast<std::size_t>(t)] = v;
        }
        return fit_phase(samples).phase;
    };

    for (int b = 1; b <= num_blocks; ++b) {
        BlockRecord rec;
        rec.block = b;
        rec.true_phase = phase;
        rec.correction = correction;
        rec.residual = phase - correction;

        double block_vis = 0.0;
        for (int t = 0; t < layout.protocol_pulses; ++t) {
            phase += model.sigma * gauss(rng);
            block_vis += fringe_visibility(phase - correction);
            unc_sum += fringe_visibility(phase);
        }
        rec.visibility = block_vis / static_cast<double>(layout.protocol_pulses);
        corr_sum += block_vis;
        report.blocks.push_back(rec);

        // Both parties estimate the same residual; their average feeds the
        // correction for the next block.
        const double est_alice = track_segment(layout.alice_track);
        const double est_bob = track_segment(layout.bob_track);
        correction += 0.5 * (est_alice + est_bob);
    }

    const double pulses =
        static_cast<double>(num_blocks) * static_cast<double>(layout.protocol_pulses);
    report.corrected_visibility = corr_sum / pulses;
    report.uncorrected_visibility = unc_sum / pulses;
    return report;
}

}  // namespace matchsim::drift
