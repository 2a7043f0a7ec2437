#pragma once

// Design search over a few free circuit parameters: coarse grid, then
// golden-section coordinate refinement.

#include <string>
#include <vector>

#include "oamsim/circuit.hpp"

namespace oamsim {

enum class Objective {
    max_min_mode_separation,  ///< smallest |detuning|/κ of a non-target shifted mode
    max_avg_efficiency,
    max_target_p0_content,    ///< |C_0|² of the target mode in the cavity basis
};

enum class FreeParam {
    optical_length_offset,  ///< added to nD, m; the laser is retuned afterwards
    source_waist,
};

struct ParamBounds {
    FreeParam param = FreeParam::source_waist;
    double lower = 0.0;
    double upper = 0.0;
};

struct OptimizeSettings {
    Objective objective = Objective::max_avg_efficiency;
    std::vector<ParamBounds> free;
    int coarse_points = 21;      ///< per free parameter
    int golden_iterations = 40;  ///< per coordinate line search
    int sweeps = 2;              ///< coordinate passes
    int separation_p_max = 2;    ///< radial orders considered for mode separation
    int threads = 1;

    void validate() const;
};

struct TraceEntry {
    int evaluation = 0;
    std::vector<double> params;
    double objective = 0.0;
    double best_so_far = 0.0;
};

struct DesignResult {
    CircuitSpec spec;            ///< best design, tuned
    std::vector<double> params;  ///< best values, in OptimizeSettings::free order
    double objective = 0.0;
    std::vector<TraceEntry> trace;
    double refinement_tolerance = 0.0;  ///< final bracket width of the last line search, per parameter max
};

[[nodiscard]] CircuitSpec apply_params(const CircuitSpec& base, const std::vector<ParamBounds>& free,
                                       const std::vector<double>& values);

[[nodiscard]] double evaluate_objective(const CircuitSpec& spec, Objective objective, int separation_p_max = 2,
                                        int threads = 1);

/// Maximizes the objective. Throws NumericalError naming the parameter point if
/// the objective is not finite there.
[[nodiscard]] DesignResult optimize_design(const CircuitSpec& base, const OptimizeSettings& settings);

[[nodiscard]] std::string to_string(Objective objective);
[[nodiscard]] std::string to_string(FreeParam param);

}  // namespace oamsim
