#include "oamsim/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

#include "oamsim/constants.hpp"
#include "oamsim/errors.hpp"
#include "oamsim/parallel.hpp"

namespace oamsim {

double CircuitSpec::wavelength() const
{
    if (!(laser_frequency > 0.0)) {
        throw InvalidArgument("circuit laser_frequency is not set; tune the circuit first");
    }
    return 2.0 * kPi * kSpeedOfLight / laser_frequency;
}

void CircuitSpec::validate() const
{
    cavity.validate();
    truncation.validate();
    if (input_modes.empty()) {
        throw InvalidArgument("input_modes must not be empty");
    }
    const std::set<int> distinct(input_modes.begin(), input_modes.end());
    if (distinct.size() != input_modes.size()) {
        throw InvalidArgument("input_modes must be distinct");
    }
    if (target_l != *distinct.rbegin() + 1) {
        throw InvalidArgument("target_l must equal max(input_modes) + 1");
    }
    for (const int l : input_modes) {
        if (std::abs(l + 1) > truncation.l_max || std::abs(l) > truncation.l_max) {
            throw InvalidArgument("input mode l = " + std::to_string(l) + " exceeds l_max after the shift");
        }
    }
    for (const double w : {source_waist, cavity_waist, detection_waist}) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw InvalidArgument("beam waists must be positive and finite");
        }
    }
    if (!(nominal_wavelength > 0.0)) {
        throw InvalidArgument("nominal_wavelength must be positive");
    }
    if (mirror_flips_right_arm < 0 || extra_flips_left_arm < 0) {
        throw InvalidArgument("flip counts must be non-negative");
    }
    if (!std::isfinite(arm_phase) || !std::isfinite(fp2_frequency_offset)) {
        throw InvalidArgument("arm_phase and fp2_frequency_offset must be finite");
    }
}

CircuitSpec six_mode_circuit_spec()
{
    CircuitSpec spec;
    spec.cavity = CavityParams::from_fsr_fwhm(7.90e9, 287e6, 25e-3);
    return tune_to_target(spec);
}

CircuitSpec ideal_circuit_spec(double decay_scale)
{
    CircuitSpec spec = six_mode_circuit_spec();
    spec.cavity.decay_left *= decay_scale;
    spec.cavity.decay_right *= decay_scale;
    spec.shift_fidelity = ShiftFidelity::index_shift;
    spec.detection = DetectionModel::modal_power;
    spec.source_waist = spec.cavity_waist;
    spec.detection_waist = spec.cavity_waist;
    return tune_to_target(spec);
}

CircuitSpec tune_to_target(CircuitSpec spec)
{
    spec.cavity.validate();
    const double phi = accumulated_gouy(spec.cavity);
    const ModeIndex target{0, spec.target_l};
    const double nominal = 2.0 * kPi * kSpeedOfLight / spec.nominal_wavelength;
    const double x = nominal / spec.cavity.fsr_angular() - (target.order() + 1) * phi / kPi;
    const auto q = static_cast<long long>(std::ceil(x - 0.5));
    if (q < 1) {
        throw GeometryError("no longitudinal order q >= 1 near the nominal frequency");
    }
    spec.laser_frequency = resonance_frequency(spec.cavity, q, target);
    return spec;
}

int expected_output_l(const CircuitSpec& spec, int input_l)
{
    const int shifted = input_l + 1;
    const int flips = (shifted == spec.target_l) ? spec.mirror_flips_right_arm : spec.left_arm_flips();
    return (flips % 2 == 0) ? shifted : -shifted;
}

std::vector<int> output_modes(const CircuitSpec& spec)
{
    std::set<int> out;
    for (const int l : spec.input_modes) {
        out.insert(expected_output_l(spec, l));
    }
    return {out.begin(), out.end()};
}

PreparedState prepare_cavity_input(const CircuitSpec& spec, int input_l)
{
    const double lambda = spec.wavelength();
    const int shifted = input_l + 1;
    if (std::abs(shifted) > spec.truncation.l_max) {
        throw TruncationError("shifted mode l = " + std::to_string(shifted) + " exceeds l_max");
    }
    const int p_max = spec.truncation.p_max;

    if (spec.shift_fidelity == ShiftFidelity::phase_only) {
        // Both phase plates act on the collimated Gaussian, so together they imprint
        // exp(-i(l+1)θ) exactly; the lens then focuses the vortex into the cavity basis.
        ModeSpectrum s = vortex_spectrum(shifted, spec.source_waist, spec.cavity_waist, lambda, p_max);
        const double loss = 1.0 - s.power();
        return {std::move(s), loss};
    }

    const ModeSpectrum prepared = ModeSpectrum::pure({0, input_l}, spec.source_waist, lambda);
    ElementResult shifted_state = apply_shift(prepared, +1, ShiftFidelity::index_shift, spec.truncation);
    RescaleResult focused = rescale_waist(shifted_state.spectrum, spec.cavity_waist, p_max);
    return {std::move(focused.spectrum), shifted_state.truncation_loss + focused.truncation_loss};
}

SplitFields cavity_split(const CavityParams& cavity, const ModeSpectrum& in, double laser_frequency,
                         double resonance_offset)
{
    SplitFields out{ModeSpectrum(in.basis_waist(), in.wavelength()), ModeSpectrum(in.basis_waist(), in.wavelength())};
    for (const auto& [m, a] : in.amplitudes()) {
        const Detuning d = nearest_detuning(cavity, m, laser_frequency - resonance_offset);
        const ScatterCoeffs s = scatter(cavity, d.detuning);
        out.reflected.set(m, s.reflection * a);
        out.transmitted.set(m, s.transmission * a);
    }
    return out;
}

PropagationResult propagate_state(const CircuitSpec& spec, const ModeSpectrum& cavity_input)
{
    const Circulator c1;
    const Circulator c2;
    const double omega = spec.laser_frequency;

    // C1 port 1 -> 2 delivers the beam to FP1.
    const auto [fp1_port, at_fp1] = c1.route(1, cavity_input);
    (void)fp1_port;
    const SplitFields fp1 = cavity_split(spec.cavity, at_fp1, omega);

    // Right arm: mirrors, then FP2 in transmission into C2 port 2 -> 3.
    const ModeSpectrum right_in = apply_flips(fp1.transmitted, spec.mirror_flips_right_arm);
    const SplitFields fp2_right = cavity_split(spec.cavity, right_in, omega, spec.fp2_frequency_offset);
    const ModeSpectrum right_out = c2.route(2, fp2_right.transmitted).second;

    // Left arm: FP1 reflection re-enters C1 at port 2 and leaves at port 3,
    // then C2 port 1 -> 2 onto FP2, whose reflection returns to port 2 -> 3.
    const ModeSpectrum left_arm = apply_flips(c1.route(2, fp1.reflected).second, spec.left_arm_flips());
    const ModeSpectrum at_fp2 = c2.route(1, left_arm).second;
    const SplitFields fp2_left = cavity_split(spec.cavity, at_fp2, omega, spec.fp2_frequency_offset);
    ModeSpectrum left_out = c2.route(2, fp2_left.reflected).second;
    left_out *= std::polar(1.0, spec.arm_phase);

    ModeSpectrum combined = right_out;
    for (const auto& [m, a] : left_out.amplitudes()) {
        combined.add(m, a);
    }
    PropagationResult result{combined, 0.0, 0.0};
    result.leaked_power = cavity_input.power() - combined.power();
    return result;
}

PropagationResult propagate(const CircuitSpec& spec, int input_l)
{
    if (std::find(spec.input_modes.begin(), spec.input_modes.end(), input_l) == spec.input_modes.end()) {
        throw InvalidArgument("input l = " + std::to_string(input_l) + " is not in the input mode set");
    }
    PreparedState prepared = prepare_cavity_input(spec, input_l);
    PropagationResult result = propagate_state(spec, prepared.spectrum);
    result.truncation_loss = prepared.truncation_loss;
    return result;
}

namespace {

double project(const ModeSpectrum& detector, const ModeSpectrum& output)
{
    return std::norm(mode_overlap(detector, output));
}

ModeSpectrum detection_state(const CircuitSpec& spec, int l, double wavelength, double basis_waist)
{
    return vortex_spectrum(l, spec.detection_waist, basis_waist, wavelength, spec.truncation.p_max);
}

}  // namespace

double detect(const CircuitSpec& spec, const ModeSpectrum& output, int l)
{
    if (spec.detection == DetectionModel::modal_power) {
        return output.power_in_l(l);
    }
    return project(detection_state(spec, l, output.wavelength(), output.basis_waist()), output);
}

CyclicReport run_cyclic(const CircuitSpec& spec, int threads)
{
    spec.validate();
    const double lambda = spec.wavelength();

    CyclicReport report;
    report.input_modes = spec.input_modes;
    report.output_modes = output_modes(spec);
    const std::size_t n = spec.input_modes.size();
    const std::size_t cols = report.output_modes.size();

    std::vector<ModeSpectrum> detectors;
    if (spec.detection == DetectionModel::projective_vortex) {
        for (const int l : report.output_modes) {
            detectors.push_back(detection_state(spec, l, lambda, spec.cavity_waist));
        }
    }

    std::vector<PropagationResult> results(n, PropagationResult{ModeSpectrum(spec.cavity_waist, lambda)});
    parallel_for(n, threads, [&](std::size_t i) { results[i] = propagate(spec, spec.input_modes[i]); });

    report.power_matrix.assign(n, std::vector<double>(cols, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const ModeSpectrum& out = results[i].output;
        double row_sum = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            const double power = detectors.empty() ? out.power_in_l(report.output_modes[j])
                                                   : project(detectors[j], out);
            report.power_matrix[i][j] = power;
            row_sum += power;
        }
        const int target = expected_output_l(spec, spec.input_modes[i]);
        const auto col = static_cast<int>(std::find(report.output_modes.begin(), report.output_modes.end(), target) -
                                          report.output_modes.begin());
        report.target_column.push_back(col);
        const double correct = report.power_matrix[i][static_cast<std::size_t>(col)];
        if (!(row_sum > 0.0)) {
            throw NumericalError("no detected power for input l = " + std::to_string(spec.input_modes[i]));
        }
        report.efficiencies.push_back(correct / row_sum);
        report.unaccounted_power.push_back(1.0 - row_sum);
        report.truncation_loss.push_back(results[i].truncation_loss);
        report.leaked_power.push_back(results[i].leaked_power);
    }
    double sum = 0.0;
    for (const double e : report.efficiencies) {
        sum += e;
    }
    report.average_efficiency = sum / static_cast<double>(n);
    return report;
}

}  // namespace oamsim
