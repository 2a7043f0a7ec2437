#pragma once

// Nonreciprocal Mach-Zehnder interferometer for cyclic OAM transformations.
//
//   input --SPP(+1)--lens--> C1 --> FP1 --t--> [right arm: mirror flips] --> FP2 (t) --> C2 --> output
//                                       \--r--> C1 --> [left arm: mirror flips + Dove prism] --> C2 --> FP2 (r) --> C2
//
// FP1 transmits the (p = 0, l = target_l) mode and reflects the rest; the two
// arms recombine coherently at C2.

#include <string>
#include <vector>

#include "oamsim/cavity.hpp"
#include "oamsim/elements.hpp"
#include "oamsim/modes.hpp"

namespace oamsim {

enum class DetectionModel {
    projective_vortex,  ///< |<phase-only vortex at detection_waist | output>|²
    modal_power,        ///< Σ_p |a_{p,l}|²
};

struct CircuitSpec {
    std::vector<int> input_modes{-3, -2, -1, 0, 1, 2};
    int target_l = 3;
    CavityParams cavity;                  ///< shared by FP1 and FP2
    double laser_frequency = 0.0;         ///< angular, rad/s; set by tune_to_target
    double nominal_wavelength = 794.9693e-9;
    double source_waist = 25e-6;
    double cavity_waist = 50e-6;
    double detection_waist = 25e-6;
    ShiftFidelity shift_fidelity = ShiftFidelity::phase_only;
    DetectionModel detection = DetectionModel::projective_vortex;
    double arm_phase = 0.0;               ///< extra phase of the left (reflection) arm, rad
    int mirror_flips_right_arm = 3;
    int extra_flips_left_arm = 1;         ///< flips the left arm adds on top of the right-arm count
    double fp2_frequency_offset = 0.0;    ///< FP2 resonance shift relative to FP1, rad/s
    Truncation truncation{};

    [[nodiscard]] int dimension() const { return static_cast<int>(input_modes.size()); }
    [[nodiscard]] double wavelength() const;
    [[nodiscard]] int left_arm_flips() const { return mirror_flips_right_arm + extra_flips_left_arm; }

    /// Throws InvalidArgument / GeometryError on an invalid configuration.
    void validate() const;
};

/// FP1/FP2 from the measured FP1 data (FSR 7.90 GHz, FWHM 287 MHz, R2 = 25 mm),
/// six modes, 25 µm incident waist into a 50 µm cavity mode, tuned.
[[nodiscard]] CircuitSpec six_mode_circuit_spec();

/// Infinite-finesse limit: κ scaled by `decay_scale`, index_shift fidelity,
/// matched waists and modal-power detection, tuned.
[[nodiscard]] CircuitSpec ideal_circuit_spec(double decay_scale = 1e-6);

/// Sets laser_frequency onto the (p = 0, l = target_l) resonance whose
/// longitudinal order is nearest the nominal optical frequency. Idempotent.
[[nodiscard]] CircuitSpec tune_to_target(CircuitSpec spec);

/// Output l an input l maps to in the ideal circuit.
[[nodiscard]] int expected_output_l(const CircuitSpec& spec, int input_l);

/// Detected output modes (columns of the power matrix), ascending.
[[nodiscard]] std::vector<int> output_modes(const CircuitSpec& spec);

struct PreparedState {
    ModeSpectrum spectrum;          ///< in the cavity basis, after the shifter and the lens
    double truncation_loss = 0.0;
};

/// Steps 1-3: input vortex, +1 shift, lens into the cavity basis.
[[nodiscard]] PreparedState prepare_cavity_input(const CircuitSpec& spec, int input_l);

struct SplitFields {
    ModeSpectrum reflected;
    ModeSpectrum transmitted;
};

/// Per-mode scatter() at each mode's nearest detuning from `laser_frequency`,
/// with the cavity resonances shifted by `resonance_offset`.
[[nodiscard]] SplitFields cavity_split(const CavityParams& cavity, const ModeSpectrum& in, double laser_frequency,
                                       double resonance_offset = 0.0);

struct PropagationResult {
    ModeSpectrum output;
    double truncation_loss = 0.0;  ///< lost while preparing the cavity input
    double leaked_power = 0.0;     ///< left through the unused cavity ports
};

/// Step 4: split at FP1, both arms, recombination at C2.
[[nodiscard]] PropagationResult propagate_state(const CircuitSpec& spec, const ModeSpectrum& cavity_input);

/// Full pipeline for one input mode.
[[nodiscard]] PropagationResult propagate(const CircuitSpec& spec, int input_l);

/// Power the detector registers for output mode `l` under spec.detection.
[[nodiscard]] double detect(const CircuitSpec& spec, const ModeSpectrum& output, int l);

struct CyclicReport {
    std::vector<int> input_modes;
    std::vector<int> output_modes;
    std::vector<std::vector<double>> power_matrix;  ///< [input][output column]
    std::vector<int> target_column;
    std::vector<double> efficiencies;               ///< I_c / I_total per input
    double average_efficiency = 0.0;
    std::vector<double> unaccounted_power;          ///< 1 - row sum
    std::vector<double> truncation_loss;
    std::vector<double> leaked_power;
};

/// Propagates every input (optionally in parallel) and projects onto the detected modes.
[[nodiscard]] CyclicReport run_cyclic(const CircuitSpec& spec, int threads = 1);

}  // namespace oamsim
