#include "oamsim/elements.hpp"

#include <cmath>
#include <cstdlib>

#include "oamsim/errors.hpp"

namespace oamsim {

namespace {

// Handles content pushed past l_max: dropped and reported, or rejected.
bool admit(int new_l, const Truncation& t, OverflowPolicy overflow, double dropped_power,
           std::vector<std::string>& warnings)
{
    if (std::abs(new_l) <= t.l_max) {
        return true;
    }
    const std::string msg = "shift pushes power " + std::to_string(dropped_power) + " to l = " +
                            std::to_string(new_l) + " beyond l_max = " + std::to_string(t.l_max);
    if (overflow == OverflowPolicy::fail) {
        throw TruncationError(msg);
    }
    warnings.push_back(msg);
    return false;
}

}  // namespace

ElementResult apply_shift(const ModeSpectrum& s, int delta_l, ShiftFidelity fidelity, const Truncation& truncation,
                          OverflowPolicy overflow)
{
    truncation.validate();
    if (delta_l == 0) {
        return {s, 0.0, {}};
    }

    ElementResult out{ModeSpectrum(s.basis_waist(), s.wavelength()), 0.0, {}};

    if (fidelity == ShiftFidelity::index_shift) {
        for (const int l : s.l_values()) {
            if (!admit(l + delta_l, truncation, overflow, s.power_in_l(l), out.warnings)) {
                continue;
            }
            for (const auto& [m, a] : s.amplitudes()) {
                if (m.l == l) {
                    out.spectrum.set({m.p, m.l + delta_l}, a);
                }
            }
        }
        out.truncation_loss = s.power() - out.spectrum.power();
        return out;
    }

    // phase_only: u_{p,l} exp(-iΔlθ) = R_{p,|l|}(r) exp(-i(l+Δl)θ), so only the
    // radial profile needs re-expanding over R_{q,|l+Δl|}.
    for (const int l : s.l_values()) {
        const int new_l = l + delta_l;
        if (!admit(new_l, truncation, overflow, s.power_in_l(l), out.warnings)) {
            continue;
        }
        for (int q = 0; q <= truncation.p_max; ++q) {
            Complex acc{};
            for (const auto& [m, a] : s.amplitudes()) {
                if (m.l != l || a == Complex{}) {
                    continue;
                }
                acc += a * lg_radial_overlap(q, std::abs(new_l), m.p, std::abs(l), s.basis_waist());
            }
            out.spectrum.add({q, new_l}, acc);
        }
    }
    out.truncation_loss = s.power() - out.spectrum.power();
    if (out.truncation_loss > 0.01) {
        out.warnings.push_back("phase-only shift lost " + std::to_string(out.truncation_loss) +
                               " of the power to p_max = " + std::to_string(truncation.p_max) + " truncation");
    }
    return out;
}

ModeSpectrum apply_flip(const ModeSpectrum& s)
{
    ModeSpectrum out(s.basis_waist(), s.wavelength());
    for (const auto& [m, a] : s.amplitudes()) {
        out.set({m.p, -m.l}, a);
    }
    return out;
}

ModeSpectrum apply_flips(const ModeSpectrum& s, int count)
{
    if (count < 0) {
        throw InvalidArgument("flip count must be non-negative");
    }
    return (count % 2 == 0) ? s : apply_flip(s);
}

ModeSpectrum apply_attenuator(const ModeSpectrum& s, double power_factor)
{
    if (!(power_factor >= 0.0 && power_factor <= 1.0)) {
        throw InvalidArgument("attenuator power_factor must lie in [0, 1]");
    }
    ModeSpectrum out = s;
    out *= std::sqrt(power_factor);
    return out;
}

ElementResult apply_element(const ElementOp& op, const ModeSpectrum& s, const Truncation& truncation,
                            OverflowPolicy overflow)
{
    struct Visitor {
        const ModeSpectrum& s;
        const Truncation& t;
        OverflowPolicy overflow;

        ElementResult operator()(const Shift& e) const { return apply_shift(s, e.delta_l, e.fidelity, t, overflow); }
        ElementResult operator()(const Flip&) const { return {apply_flip(s), 0.0, {}}; }
        ElementResult operator()(const Lens& e) const
        {
            RescaleResult r = rescale_waist(s, e.new_waist, t.p_max);
            ElementResult out{std::move(r.spectrum), r.truncation_loss, {}};
            if (r.warning) {
                out.warnings.push_back(*r.warning);
            }
            return out;
        }
        ElementResult operator()(const Attenuator& e) const
        {
            ElementResult out{apply_attenuator(s, e.power_factor), 0.0, {}};
            return out;
        }
    };
    return std::visit(Visitor{s, truncation, overflow}, op);
}

std::pair<int, ModeSpectrum> Circulator::route(int entering_port, const ModeSpectrum& field) const
{
    switch (entering_port) {
    case 1:
        return {2, field};
    case 2:
        return {3, field};
    default:
        throw InvalidArgument("circulator: no output defined for entering port " + std::to_string(entering_port));
    }
}

}  // namespace oamsim
