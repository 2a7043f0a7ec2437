#pragma once

// Fabry-Perot cavity: transverse-order dependent resonances from the
// accumulated Gouy phase, and per-mode reflection/transmission from the
// two-port input-output relation
//   r(Δ) = 1 - 2κ_l/(iΔ + κ),   t(Δ) = 2 sqrt(κ_l κ_r)/(iΔ + κ).
//
// All rates and detunings are angular (rad/s). κ is the half width at half
// maximum of T(Δ) = |t|², so the FWHM in ordinary frequency is κ/π.

#include <complex>
#include <limits>

#include "oamsim/modes.hpp"

namespace oamsim {

enum class GouyBranch { plus, minus };

struct CavityParams {
    double geometric_length = 0.0;   ///< D, m
    double refractive_index = 1.0;   ///< n
    double curvature_front = std::numeric_limits<double>::infinity();  ///< R1, m
    double curvature_back = std::numeric_limits<double>::infinity();   ///< R2, m
    double decay_left = 0.0;         ///< κ_l, rad/s
    double decay_right = 0.0;        ///< κ_r, rad/s
    double decay_internal = 0.0;     ///< extra loss, rad/s
    GouyBranch gouy_branch = GouyBranch::plus;

    /// n·D
    [[nodiscard]] double optical_length() const { return refractive_index * geometric_length; }
    [[nodiscard]] double total_decay() const { return decay_left + decay_right + decay_internal; }
    /// (1 - D/R1)(1 - D/R2)
    [[nodiscard]] double g_product() const;
    /// πc/(nD): angular spacing of consecutive longitudinal orders.
    [[nodiscard]] double fsr_angular() const;

    /// Throws InvalidArgument / GeometryError on violated invariants.
    void validate() const;

    /// Symmetric lossless cavity with the given FSR and FWHM (Hz). The optical
    /// length is c/(2·fsr); the geometric length follows from n.
    static CavityParams from_fsr_fwhm(double fsr_hz, double fwhm_hz, double curvature_back,
                                      double refractive_index = 1.453,
                                      double curvature_front = std::numeric_limits<double>::infinity());
};

struct ScatterCoeffs {
    std::complex<double> reflection;
    std::complex<double> transmission;
    double detuning = 0.0;

    [[nodiscard]] double reflectance() const { return std::norm(reflection); }
    [[nodiscard]] double transmittance() const { return std::norm(transmission); }
    [[nodiscard]] double reflection_phase() const { return std::arg(reflection); }
    [[nodiscard]] double transmission_phase() const { return std::arg(transmission); }
};

/// φ = arccos(±sqrt(g1 g2)).
[[nodiscard]] double accumulated_gouy(const CavityParams& c);

/// ω = (πc/nD) [q + (2p+|l|+1) φ/π].
[[nodiscard]] double resonance_frequency(const CavityParams& c, long long q, const ModeIndex& m);

struct Detuning {
    double detuning = 0.0;  ///< ω_laser - ω_res(q, m), rad/s
    long long q = 0;
};

/// Nearest longitudinal order; exact midpoints resolve to the lower q.
[[nodiscard]] Detuning nearest_detuning(const CavityParams& c, const ModeIndex& m, double laser_frequency);

[[nodiscard]] ScatterCoeffs scatter(const CavityParams& c, double detuning);

struct LinewidthFinesse {
    double fsr_hz = 0.0;
    double fwhm_hz = 0.0;
    double finesse = 0.0;
};

[[nodiscard]] LinewidthFinesse linewidth_and_finesse(const CavityParams& c);

struct DecayRates {
    double left = 0.0;
    double right = 0.0;
};

/// κ_l = κ_r = π·fwhm/2, so that T(Δ) has the requested FWHM.
[[nodiscard]] DecayRates fit_decay_from_fwhm(double fwhm_hz);

}  // namespace oamsim
