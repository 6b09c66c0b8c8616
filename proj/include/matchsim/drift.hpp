#pragma once
// Interferometric phase drift and its block-wise correction.
//
// The differential phase between the two interferometer arms performs a
// Gaussian random walk per pulse. Pulses are organized in fixed-size blocks:
// a protocol segment followed by two tracking segments (one per party). Each
// tracking segment sweeps a full 2 pi ramp across its samples and reads the
// interference intensity I_t = A (1 + cos(theta_t + delta)) / 2 scaled by
// (1 + relative noise), where delta is the current residual phase. Fitting
// the first Fourier coefficient recovers delta; the average of the two
// segment estimates is added to the correction applied to the next block.
// Fringe visibility of a pulse with residual delta is cos^2(delta / 2).

#include <span>
#include <stdexcept>
#include <vector>

#include "matchsim/rng.hpp"

namespace matchsim::drift {

struct BlockLayout {
    int block_size = 8192;
    int protocol_pulses = 7680;
    int alice_track = 256;
    int bob_track = 256;
    void validate() const;  // segments must tile the block exactly
};

struct DriftModel {
    double sigma = 0.0;            // random-walk step std, radians per pulse
    double intensity_noise = 0.0;  // relative amplitude noise on samples
};

// Random walk starting at phase 0; element t is the phase after t steps.
std::vector<double> simulate_phase_walk(int num_pulses, const DriftModel& model,
                                        Rng& rng);

// Intensity samples of one tracking segment at fixed true phase.
std::vector<double> ramp_calibration_samples(double true_phase, int count,
                                             const DriftModel& model, Rng& rng);

class degenerate_fit_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct PhaseFit {
    double phase = 0.0;         // in (-pi, pi]
    double amplitude = 0.0;     // fitted fringe amplitude A
    double residual_rms = 0.0;  // RMS misfit of the cosine model
};

// First-harmonic DFT fit of a full-ramp segment. Throws degenerate_fit_error
// when the harmonic content vanishes (constant or empty input).
PhaseFit fit_phase(std::span<const double> samples);

struct BlockRecord {
    int block = 0;         // 1-based
    double true_phase = 0.0;   // walk value entering the block
    double correction = 0.0;   // correction applied during the block
    double residual = 0.0;     // true_phase - correction
    double visibility = 0.0;   // mean cos^2(residual/2) over protocol pulses
};

struct DriftReport {
    std::vector<BlockRecord> blocks;
    // Means over all protocol pulses of the whole run; uncorrected applies no
    // correction to the same trajectory, so the pair is seed-matched.
    double corrected_visibility = 0.0;
    double uncorrected_visibility = 0.0;
};

DriftReport run_blocks(int num_blocks, const BlockLayout& layout,
                       const DriftModel& model, Rng& rng);

}  // namespace matchsim::drift
