#include "oamsim/cavity.hpp"

#include <cmath>
#include <cstdlib>

#include "oamsim/constants.hpp"
#include "oamsim/errors.hpp"

namespace oamsim {

namespace {

double one_minus_ratio(double length, double curvature)
{
    return std::isinf(curvature) ? 1.0 : 1.0 - length / curvature;
}

}  // namespace

double CavityParams::g_product() const
{
    return one_minus_ratio(geometric_length, curvature_front) * one_minus_ratio(geometric_length, curvature_back);
}

double CavityParams::fsr_angular() const { return kPi * kSpeedOfLight / optical_length(); }

void CavityParams::validate() const
{
    if (!(geometric_length > 0.0) || !std::isfinite(geometric_length)) {
        throw InvalidArgument("cavity geometric_length must be positive and finite");
    }
    if (!(refractive_index > 0.0) || !std::isfinite(refractive_index)) {
        throw InvalidArgument("cavity refractive_index must be positive and finite");
    }
    if (!(decay_left > 0.0) || !(decay_right > 0.0) || !std::isfinite(decay_left) || !std::isfinite(decay_right)) {
        throw InvalidArgument("cavity mirror decay rates must be positive and finite");
    }
    if (!(decay_internal >= 0.0) || !std::isfinite(decay_internal)) {
        throw InvalidArgument("cavity decay_internal must be non-negative");
    }
    if (std::isnan(curvature_front) || std::isnan(curvature_back) || curvature_front == 0.0 ||
        curvature_back == 0.0) {
        throw InvalidArgument("mirror curvature must be non-zero");
    }
    const double g = g_product();
    if (!(g >= 0.0 && g <= 1.0)) {
        throw GeometryError("unstable cavity: g1*g2 = " + std::to_string(g) + " outside [0, 1]");
    }
}

CavityParams CavityParams::from_fsr_fwhm(double fsr_hz, double fwhm_hz, double curvature_back,
                                         double refractive_index, double curvature_front)
{
    if (!(fsr_hz > 0.0) || !(fwhm_hz > 0.0)) {
        throw InvalidArgument("fsr and fwhm must be positive");
    }
    CavityParams c;
    c.refractive_index = refractive_index;
    c.geometric_length = kSpeedOfLight / (2.0 * fsr_hz) / refractive_index;
    c.curvature_front = curvature_front;
    c.curvature_back = curvature_back;
    const DecayRates k = fit_decay_from_fwhm(fwhm_hz);
    c.decay_left = k.left;
    c.decay_right = k.right;
    c.validate();
    return c;
}

double accumulated_gouy(const CavityParams& c)
{
    const double g = c.g_product();
    if (!(g >= 0.0 && g <= 1.0)) {
        throw GeometryError("unstable cavity: g1*g2 = " + std::to_string(g) + " outside [0, 1]");
    }
    const double root = std::sqrt(g);
    return std::acos(c.gouy_branch == GouyBranch::plus ? root : -root);
}

double resonance_frequency(const CavityParams& c, long long q, const ModeIndex& m)
{
    const double phi = accumulated_gouy(c);
    return c.fsr_angular() * (static_cast<double>(q) + (m.order() + 1) * phi / kPi);
}

Detuning nearest_detuning(const CavityParams& c, const ModeIndex& m, double laser_frequency)
{
    if (!(laser_frequency > 0.0) || !std::isfinite(laser_frequency)) {
        throw InvalidArgument("laser_frequency must be positive and finite");
    }
    const double phi = accumulated_gouy(c);
    const double x = laser_frequency / c.fsr_angular() - (m.order() + 1) * phi / kPi;
    // ceil(x - 1/2) sends an exact midpoint to the lower order
    const auto q = static_cast<long long>(std::ceil(x - 0.5));
    Detuning d{laser_frequency - resonance_frequency(c, q, m), q};
    // x carries the rounding error of the division; settle on the true nearest order
    const double half = 0.5 * c.fsr_angular();
    if (d.detuning > half) {
        d = {laser_frequency - resonance_frequency(c, q + 1, m), q + 1};
    }
    else if (d.detuning < -half) {
        d = {laser_frequency - resonance_frequency(c, q - 1, m), q - 1};
    }
    // midpoints only exist up to rounding; within that slack the lower order wins
    if (d.detuning < -half * (1.0 - 1e-9)) {
        d = {laser_frequency - resonance_frequency(c, d.q - 1, m), d.q - 1};
    }
    return d;
}

ScatterCoeffs scatter(const CavityParams& c, double detuning)
{
    const double kappa = c.total_decay();
    if (!(kappa > 0.0)) {
        throw InvalidArgument("scatter: total decay must be positive");
    }
    // Normalised by κ so that Δ = 0 with κ_l = κ_r = κ/2 gives t = 1, r = 0 exactly.
    const double u = detuning / kappa;
    const std::complex<double> lorentz = std::complex<double>(1.0, -u) / (1.0 + u * u);  // 1/(1 + iu)
    const double in = 2.0 * c.decay_left / kappa;
    const double through = 2.0 * std::sqrt(c.decay_left * c.decay_right) / kappa;
    return {1.0 - in * lorentz, through * lorentz, detuning};
}

LinewidthFinesse linewidth_and_finesse(const CavityParams& c)
{
    LinewidthFinesse out;
    out.fsr_hz = kSpeedOfLight / (2.0 * c.optical_length());
    out.fwhm_hz = c.total_decay() / kPi;
    out.finesse = out.fsr_hz / out.fwhm_hz;
    return out;
}

DecayRates fit_decay_from_fwhm(double fwhm_hz)
{
    if (!(fwhm_hz > 0.0) || !std::isfinite(fwhm_hz)) {
        throw InvalidArgument("fwhm must be positive and finite");
    }
    const double half = kPi * fwhm_hz / 2.0;
    return {half, half};
}

}  // namespace oamsim
