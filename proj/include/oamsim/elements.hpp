#pragma once

// Mode-space operators for the non-cavity optics: l-shifters (SPP or the
// QWP-QP-QWP sandwich), l-flippers (mirrors, Dove prism), lenses, attenuators
// and ideal three-port circulators. Polarisation is not tracked.

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "oamsim/modes.hpp"

namespace oamsim {

enum class ShiftFidelity {
    index_shift,  ///< (p, l) -> (p, l + Δl), amplitude unchanged
    phase_only,   ///< multiply the field by exp(-iΔlθ) and re-decompose radially
};

enum class OverflowPolicy { warn, fail };

struct ElementResult {
    ModeSpectrum spectrum;
    double truncation_loss = 0.0;
    std::vector<std::string> warnings;
};

[[nodiscard]] ElementResult apply_shift(const ModeSpectrum& s, int delta_l, ShiftFidelity fidelity,
                                        const Truncation& truncation = {},
                                        OverflowPolicy overflow = OverflowPolicy::fail);

/// (p, l) -> (p, -l). An involution.
[[nodiscard]] ModeSpectrum apply_flip(const ModeSpectrum& s);

/// `count` successive flips; only the parity matters.
[[nodiscard]] ModeSpectrum apply_flips(const ModeSpectrum& s, int count);

[[nodiscard]] ModeSpectrum apply_attenuator(const ModeSpectrum& s, double power_factor);

struct Shift {
    int delta_l = 1;
    ShiftFidelity fidelity = ShiftFidelity::index_shift;
};
struct Flip {};
struct Lens {
    double new_waist = 0.0;
};
struct Attenuator {
    double power_factor = 1.0;
};

using ElementOp = std::variant<Shift, Flip, Lens, Attenuator>;

[[nodiscard]] ElementResult apply_element(const ElementOp& op, const ModeSpectrum& s,
                                          const Truncation& truncation = {},
                                          OverflowPolicy overflow = OverflowPolicy::fail);

/// Ideal lossless, phase-neutral three-port circulator: port 1 -> 2, 2 -> 3.
class Circulator {
public:
    [[nodiscard]] std::pair<int, ModeSpectrum> route(int entering_port, const ModeSpectrum& field) const;
};

}  // namespace oamsim
