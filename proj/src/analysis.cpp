#include "oamsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "oamsim/constants.hpp"
#include "oamsim/errors.hpp"
#include "oamsim/parallel.hpp"

namespace oamsim {

void SweepGrid::validate() const
{
    if (steps < 2) {
        throw InvalidArgument("sweep grid needs at least 2 steps");
    }
    if (!(start < stop) || !std::isfinite(start) || !std::isfinite(stop)) {
        throw InvalidArgument("sweep grid needs finite start < stop");
    }
}

std::vector<double> SweepGrid::values() const
{
    validate();
    std::vector<double> v(static_cast<std::size_t>(steps));
    const double h = (stop - start) / (steps - 1);
    for (int i = 0; i < steps; ++i) {
        v[static_cast<std::size_t>(i)] = start + i * h;
    }
    v.back() = stop;
    return v;
}

std::vector<double> cavity_mode_weights(int l, const PreparationSettings& prep)
{
    std::vector<double> w(static_cast<std::size_t>(prep.p_max) + 1, 0.0);
    if (prep.fidelity == ShiftFidelity::phase_only) {
        const auto c = radial_coefficients(l, prep.source_waist, prep.cavity_waist, prep.p_max);
        for (std::size_t p = 0; p < c.size(); ++p) {
            w[p] = std::norm(c[p]);
        }
        return w;
    }
    // Wavelength only labels the spectrum here; overlaps do not depend on it.
    const ModeSpectrum ideal = ModeSpectrum::pure({0, l}, prep.source_waist, 1.0);
    const RescaleResult r = rescale_waist(ideal, prep.cavity_waist, prep.p_max);
    for (int p = 0; p <= prep.p_max; ++p) {
        w[static_cast<std::size_t>(p)] = std::norm(r.spectrum.amplitude({p, l}));
    }
    return w;
}

double fp1_transmission(const CavityParams& cavity, int l, std::span<const double> weights, double laser_frequency)
{
    double total = 0.0;
    for (std::size_t p = 0; p < weights.size(); ++p) {
        if (weights[p] == 0.0) {
            continue;
        }
        const Detuning d = nearest_detuning(cavity, {static_cast<int>(p), l}, laser_frequency);
        total += weights[p] * scatter(cavity, d.detuning).transmittance();
    }
    return total;
}

std::vector<Peak> detect_peaks(std::span<const TracePoint> pts, double floor_fraction)
{
    std::vector<Peak> peaks;
    if (pts.size() < 3) {
        return peaks;
    }
    double global = 0.0;
    for (const auto& p : pts) {
        global = std::max(global, p.transmission);
    }
    const double floor = floor_fraction * global;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const double left = pts[i - 1].transmission;
        const double mid = pts[i].transmission;
        const double right = pts[i + 1].transmission;
        if (!(mid > left && mid >= right && mid >= floor)) {
            continue;
        }
        const double curvature = left - 2.0 * mid + right;
        const double delta = curvature < 0.0 ? 0.5 * (left - right) / curvature : 0.0;
        Peak pk;
        pk.grid_index = i;
        pk.height = mid - 0.25 * (left - right) * delta;
        pk.wavelength = pts[i].wavelength + delta * 0.5 * (pts[i + 1].wavelength - pts[i - 1].wavelength);
        pk.frequency_offset_hz =
            pts[i].frequency_offset_hz + delta * 0.5 * (pts[i + 1].frequency_offset_hz - pts[i - 1].frequency_offset_hz);
        peaks.push_back(pk);
    }
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.wavelength < b.wavelength; });
    return peaks;
}

SweepResult wavelength_sweep(const CavityParams& cavity, const SweepGrid& grid, std::span<const int> l_values,
                             const PreparationSettings& prep, double reference_frequency_hz, int threads)
{
    cavity.validate();
    if (grid.quantity != SweepQuantity::wavelength) {
        throw InvalidArgument("wavelength_sweep needs a wavelength grid");
    }
    const std::vector<double> lambdas = grid.values();
    if (lambdas.front() <= 0.0) {
        throw InvalidArgument("wavelengths must be positive");
    }

    SweepResult result;
    result.reference_frequency_hz = reference_frequency_hz;

    const double fwhm = linewidth_and_finesse(cavity).fwhm_hz;
    double max_step = 0.0;
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        max_step = std::max(max_step, kSpeedOfLight / lambdas[i - 1] - kSpeedOfLight / lambdas[i]);
    }
    if (max_step > fwhm / 4.0) {
        result.warnings.push_back("sweep step " + std::to_string(max_step * 1e-6) + " MHz is coarser than fwhm/4 = " +
                                  std::to_string(fwhm / 4.0 * 1e-6) + " MHz; peaks may be missed");
    }

    result.traces.resize(l_values.size());
    parallel_for(l_values.size(), threads, [&](std::size_t k) {
        const int l = l_values[k];
        const std::vector<double> weights = cavity_mode_weights(l, prep);
        SpectrumTrace trace;
        trace.l = l;
        trace.points.reserve(lambdas.size());
        for (const double lambda : lambdas) {
            const double omega = 2.0 * kPi * kSpeedOfLight / lambda;
            const double t = fp1_transmission(cavity, l, weights, omega);
            trace.points.push_back({lambda, kSpeedOfLight / lambda - reference_frequency_hz, t});
        }
        trace.peaks = detect_peaks(trace.points);
        result.traces[k] = std::move(trace);
    });
    return result;
}

SweepGrid wavelength_grid_around(double center, double span_hz, int points)
{
    if (!(center > 0.0) || !(span_hz > 0.0)) {
        throw InvalidArgument("sweep centre and span must be positive");
    }
    const double nu = center / (2.0 * kPi);
    const double nu_lo = nu - 0.5 * span_hz;
    const double nu_hi = nu + 0.5 * span_hz;
    SweepGrid g{SweepQuantity::wavelength, kSpeedOfLight / nu_hi, kSpeedOfLight / nu_lo, points};
    g.validate();
    return g;
}

std::vector<WaistScanRow> waist_scan(const CircuitSpec& spec, std::span<const int> l_values,
                                     std::span<const double> waists, int threads)
{
    spec.cavity.validate();
    if (!(spec.laser_frequency > 0.0)) {
        throw InvalidArgument("waist_scan needs a tuned circuit");
    }
    const std::size_t n = l_values.size() * waists.size();
    std::vector<WaistScanRow> rows(n);
    parallel_for(n, threads, [&](std::size_t k) {
        const int l = l_values[k / waists.size()];
        const double w = waists[k % waists.size()];
        PreparationSettings prep{w, spec.cavity_waist, spec.shift_fidelity, spec.truncation.p_max};
        const std::vector<double> weights = cavity_mode_weights(l, prep);
        const ModeIndex own{0, l};
        const long long q = nearest_detuning(spec.cavity, own, spec.laser_frequency).q;
        const double omega = resonance_frequency(spec.cavity, q, own);
        rows[k] = {l, w, fp1_transmission(spec.cavity, l, weights, omega), weights[0]};
    });
    return rows;
}

CavityParams with_finesse(const CavityParams& cavity, double finesse)
{
    if (!(finesse > 0.0) || !std::isfinite(finesse)) {
        throw InvalidArgument("finesse must be positive and finite");
    }
    CavityParams c = cavity;
    const double fwhm_hz = cavity.fsr_angular() / (2.0 * kPi) / finesse;
    const double mirror = 0.5 * (kPi * fwhm_hz - cavity.decay_internal);
    if (!(mirror > 0.0)) {
        throw InvalidArgument("internal loss alone exceeds the requested linewidth");
    }
    c.decay_left = mirror;
    c.decay_right = mirror;
    return c;
}

std::vector<FinessePoint> finesse_ladder(const CircuitSpec& spec, std::span<const double> finesses, int threads)
{
    std::vector<FinessePoint> out(finesses.size());
    for (std::size_t i = 0; i < finesses.size(); ++i) {
        CircuitSpec s = spec;
        s.cavity = with_finesse(spec.cavity, finesses[i]);
        out[i] = {finesses[i], run_cyclic(tune_to_target(s), threads).average_efficiency};
    }
    return out;
}

}  // namespace oamsim
