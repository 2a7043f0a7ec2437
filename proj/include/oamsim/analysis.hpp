#pragma once

// Parameter sweeps: FP1 transmission spectra of prepared vortex beams versus
// laser wavelength, and on-resonance transmission versus incident waist.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "oamsim/cavity.hpp"
#include "oamsim/circuit.hpp"
#include "oamsim/elements.hpp"

namespace oamsim {

enum class SweepQuantity { wavelength, source_waist, finesse };

struct SweepGrid {
    SweepQuantity quantity = SweepQuantity::wavelength;
    double start = 0.0;
    double stop = 0.0;
    int steps = 2;

    void validate() const;
    /// start + i (stop - start)/(steps - 1); the last value is exactly `stop`.
    [[nodiscard]] std::vector<double> values() const;
};

/// How the beam reaching FP1 is prepared.
struct PreparationSettings {
    double source_waist = 25e-6;
    double cavity_waist = 50e-6;
    ShiftFidelity fidelity = ShiftFidelity::phase_only;  ///< index_shift: an ideal LG(0, l) beam
    int p_max = 10;
};

/// |C_p|² for p = 0..p_max of the beam of charge l delivered into the cavity basis.
[[nodiscard]] std::vector<double> cavity_mode_weights(int l, const PreparationSettings& prep);

/// Σ_p weights[p] · T(Δ_{p,l}) at the given angular laser frequency.
[[nodiscard]] double fp1_transmission(const CavityParams& cavity, int l, std::span<const double> weights,
                                      double laser_frequency);

struct TracePoint {
    double wavelength = 0.0;           ///< m
    double frequency_offset_hz = 0.0;  ///< c/λ minus the reference frequency
    double transmission = 0.0;
};

struct Peak {
    double wavelength = 0.0;
    double frequency_offset_hz = 0.0;
    double height = 0.0;
    std::size_t grid_index = 0;
};

struct SpectrumTrace {
    int l = 0;
    std::vector<TracePoint> points;
    std::vector<Peak> peaks;  ///< sorted by wavelength
};

struct SweepResult {
    std::vector<SpectrumTrace> traces;
    std::vector<std::string> warnings;
    double reference_frequency_hz = 0.0;
};

/// Local maxima at or above `floor_fraction` of the global maximum, refined by
/// a three-point parabola.
[[nodiscard]] std::vector<Peak> detect_peaks(std::span<const TracePoint> points, double floor_fraction = 0.01);

/// FP1 transmission spectra for each l over a wavelength grid. Offsets are
/// quoted against `reference_frequency_hz` (ordinary frequency).
[[nodiscard]] SweepResult wavelength_sweep(const CavityParams& cavity, const SweepGrid& grid,
                                           std::span<const int> l_values, const PreparationSettings& prep,
                                           double reference_frequency_hz, int threads = 1);

/// Wavelength grid of `points` samples spanning `span_hz` centred on the
/// angular frequency `center`.
[[nodiscard]] SweepGrid wavelength_grid_around(double center, double span_hz, int points);

struct WaistScanRow {
    int l = 0;
    double source_waist = 0.0;
    double transmission = 0.0;  ///< at the mode's own (p = 0, |l|) resonance
    double p0_content = 0.0;    ///< |C_0|²
};

/// On-resonance FP1 transmission per (l, source waist) for a tuned circuit. Each
/// l is evaluated at its own (p = 0, |l|) resonance in the order q nearest the
/// circuit's laser frequency.
[[nodiscard]] std::vector<WaistScanRow> waist_scan(const CircuitSpec& spec, std::span<const int> l_values,
                                                   std::span<const double> waists, int threads = 1);

/// Same cavity with symmetric mirror decay set so that FSR/FWHM = finesse.
[[nodiscard]] CavityParams with_finesse(const CavityParams& cavity, double finesse);

struct FinessePoint {
    double finesse = 0.0;
    double average_efficiency = 0.0;
};

/// Average cyclic efficiency of `spec` with its cavities rebuilt at each finesse.
[[nodiscard]] std::vector<FinessePoint> finesse_ladder(const CircuitSpec& spec, std::span<const double> finesses,
                                                       int threads = 1);

}  // namespace oamsim
