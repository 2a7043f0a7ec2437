#pragma once

// Laguerre-Gaussian mode mathematics: field evaluation at the waist plane,
// phase-only vortex decomposition, LG-basis spectra and cross-waist overlaps.
//
// Conventions
//   u_{p,l}(r, θ) = R_{p,|l|}(r) exp(-i l θ), power-normalised over the plane.
//   Azimuthal integrals are taken analytically, so every numerical integral
//   in this module is a one-dimensional radial quadrature on [0, r_max].

#include <compare>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oamsim {

using Complex = std::complex<double>;

struct ModeIndex {
    int p = 0;  ///< radial index, >= 0
    int l = 0;  ///< topological charge

    /// Transverse order 2p + |l|; fixes the cavity resonance offset.
    [[nodiscard]] int order() const;

    friend auto operator<=>(const ModeIndex&, const ModeIndex&) = default;
};

/// Truncation of the LG basis used by spectra and decompositions.
struct Truncation {
    int p_max = 10;
    int l_max = 6;

    [[nodiscard]] bool contains(const ModeIndex& m) const;
    void validate() const;
};

class BeamParams {
public:
    BeamParams(double waist_radius, double wavelength);

    [[nodiscard]] double waist_radius() const { return waist_; }
    [[nodiscard]] double wavelength() const { return wavelength_; }
    /// z_R = π w0² / λ
    [[nodiscard]] double rayleigh_range() const;
    /// w(z) = w0 sqrt(1 + z²/z_R²)
    [[nodiscard]] double beam_radius(double z) const;

private:
    double waist_;
    double wavelength_;
};

/// Radial part R_{p,|l|}(r) of the normalised LG mode at its waist (real).
/// Prefactor and power terms are evaluated in the log domain.
[[nodiscard]] double lg_radial(int p, int abs_l, double waist, double r);

/// u_{p,l}(r, θ) at the waist plane, normalised to unit power.
[[nodiscard]] Complex lg_field_at_waist(const ModeIndex& m, const BeamParams& beam, double r, double theta);

/// Generalised Laguerre polynomial L_n^{(alpha)}(x) by the three-term recurrence.
[[nodiscard]] double generalized_laguerre(int n, double alpha, double x);

/// ψ(z) = arctan(z / z_R).
[[nodiscard]] double gouy_phase(double z, double rayleigh_range);

/// Power-normalised phase-only vortex sqrt(2/π)/w0 · exp(-r²/w0²) exp(-i l θ).
[[nodiscard]] Complex vortex_field(int l, double waist, double r, double theta);

/// LG expansion coefficients C_0..C_{p_max} of a phase-only vortex of charge l
/// delivered into an LG basis of waist `basis_waist`.
///
/// `source_waist` is the waist of the Gaussian envelope where the vortex is
/// focused into the basis plane. The focusing lens is an optical Fourier
/// transform, which maps u_{p,l}(w) onto u_{p,l}(λf/πw); the coefficients are
/// therefore C_p = <u_{p,l}(source_waist) | vortex(l, basis_waist)>, with the
/// common Gouy factor (-i)^{2p+|l|} absorbed into the basis phase convention.
/// This places the p = 0 optimum at source_waist = basis_waist / sqrt(|l|+1).
///
/// Equal waists use the closed form (exact (1,0,0,...) for l = 0); otherwise
/// the coefficients come from radial quadrature.
[[nodiscard]] std::vector<Complex> radial_coefficients(int l, double source_waist, double basis_waist, int p_max);

/// Equal-waist closed form
///   C_p = Γ(p+|l|/2) Γ(|l|/2+1) / (Γ(|l|/2) sqrt(p! (p+|l|)!)),
/// with C = (1, 0, 0, ...) for l = 0.
[[nodiscard]] std::vector<double> radial_coefficients_closed_form(int l, int p_max);

/// Quadrature route for any pair of waists.
[[nodiscard]] std::vector<double> radial_coefficients_quadrature(int l, double source_waist, double basis_waist,
                                                                 int p_max);

/// 2π ∫ R_{p1,a}(w1) R_{p2,a}(w2) r dr: overlap of two LG modes sharing |l| = a.
[[nodiscard]] double lg_cross_overlap(int p1, double w1, int p2, double w2, int abs_l);

/// 2π ∫ R_{p1,a1}(w) R_{p2,a2}(w) r dr: overlap of radial profiles with different |l|,
/// as needed when a phase-only element changes the charge.
[[nodiscard]] double lg_radial_overlap(int p1, int abs_l1, int p2, int abs_l2, double waist);

/// Radial integration bound used by every quadrature in this module.
[[nodiscard]] double radial_integration_limit(double max_waist, int max_p, int abs_l);

/// A monochromatic field in the LG basis at a given waist and wavelength.
class ModeSpectrum {
public:
    using AmplitudeMap = std::map<ModeIndex, Complex>;

    ModeSpectrum(double basis_waist, double wavelength);

    static ModeSpectrum pure(const ModeIndex& m, double basis_waist, double wavelength);

    [[nodiscard]] double basis_waist() const { return waist_; }
    [[nodiscard]] double wavelength() const { return wavelength_; }
    [[nodiscard]] const AmplitudeMap& amplitudes() const { return amps_; }

    [[nodiscard]] Complex amplitude(const ModeIndex& m) const;
    void set(const ModeIndex& m, Complex a);
    void add(const ModeIndex& m, Complex a);

    [[nodiscard]] double power() const;
    [[nodiscard]] double power_in_l(int l) const;
    [[nodiscard]] std::set<int> l_values() const;
    [[nodiscard]] bool empty() const { return amps_.empty(); }

    /// Throws InvalidArgument if a key lies outside `t` or the power exceeds 1 + 1e-9.
    void check_invariants(const Truncation& t) const;

    ModeSpectrum& operator*=(Complex factor);

    friend bool operator==(const ModeSpectrum&, const ModeSpectrum&) = default;

private:
    double waist_;
    double wavelength_;
    AmplitudeMap amps_;
};

/// <a|b>. Waists may differ; wavelengths must agree.
[[nodiscard]] Complex mode_overlap(const ModeSpectrum& a, const ModeSpectrum& b);

struct RescaleResult {
    ModeSpectrum spectrum;
    double truncation_loss = 0.0;  ///< input power minus output power
    std::optional<std::string> warning;
};

/// Re-express `s` in the LG basis at `new_basis_waist` (same plane). l content is unchanged.
[[nodiscard]] RescaleResult rescale_waist(const ModeSpectrum& s, double new_basis_waist, int p_max,
                                          double warn_threshold = 0.01);

/// Spectrum of a focused phase-only vortex (see radial_coefficients).
[[nodiscard]] ModeSpectrum vortex_spectrum(int l, double source_waist, double basis_waist, double wavelength,
                                           int p_max);

}  // namespace oamsim
