#include "oamsim/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "oamsim/errors.hpp"
#include "oamsim/parallel.hpp"

namespace oamsim {

std::string to_string(Objective objective)
{
    switch (objective) {
        case Objective::max_min_mode_separation: return "max_min_mode_separation";
        case Objective::max_avg_efficiency: return "max_avg_efficiency";
        case Objective::max_target_p0_content: return "max_target_p0_content";
    }
    return "unknown";
}

std::string to_string(FreeParam param)
{
    switch (param) {
        case FreeParam::optical_length_offset: return "optical_length_offset";
        case FreeParam::source_waist: return "source_waist";
    }
    return "unknown";
}

void OptimizeSettings::validate() const
{
    if (coarse_points < 2 || golden_iterations < 0 || sweeps < 0 || separation_p_max < 0) {
        throw InvalidArgument("optimizer needs coarse_points >= 2 and non-negative iteration counts");
    }
    for (std::size_t i = 0; i < free.size(); ++i) {
        const auto& b = free[i];
        if (!(b.lower < b.upper) || !std::isfinite(b.lower) || !std::isfinite(b.upper)) {
            throw InvalidArgument("bounds for " + to_string(b.param) + " need finite lower < upper");
        }
        if (b.param == FreeParam::source_waist && !(b.lower > 0.0)) {
            throw InvalidArgument("source_waist bounds must be positive");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (free[j].param == b.param) {
                throw InvalidArgument("free parameter " + to_string(b.param) + " listed twice");
            }
        }
    }
}

CircuitSpec apply_params(const CircuitSpec& base, const std::vector<ParamBounds>& free,
                         const std::vector<double>& values)
{
    CircuitSpec spec = base;
    for (std::size_t i = 0; i < free.size(); ++i) {
        const double v = values.at(i);
        switch (free[i].param) {
            case FreeParam::source_waist:
                spec.source_waist = v;
                break;
            case FreeParam::optical_length_offset: {
                const double optical = base.cavity.optical_length() + v;
                if (!(optical > 0.0)) {
                    throw GeometryError("optical length offset makes the cavity length non-positive");
                }
                spec.cavity.geometric_length = optical / spec.cavity.refractive_index;
                break;
            }
        }
    }
    return tune_to_target(spec);
}

namespace {

double min_mode_separation(const CircuitSpec& spec, int p_max)
{
    const double kappa = spec.cavity.total_decay();
    const ModeIndex target{0, spec.target_l};
    double best = std::numeric_limits<double>::infinity();
    for (const int l : spec.input_modes) {
        for (int p = 0; p <= p_max; ++p) {
            const ModeIndex m{p, l + 1};
            if (m.order() == target.order() && m.p == 0) {
                continue;
            }
            const double d = std::abs(nearest_detuning(spec.cavity, m, spec.laser_frequency).detuning) / kappa;
            best = std::min(best, d);
        }
    }
    return best;
}

}  // namespace

double evaluate_objective(const CircuitSpec& spec, Objective objective, int separation_p_max, int threads)
{
    switch (objective) {
        case Objective::max_min_mode_separation:
            return min_mode_separation(spec, separation_p_max);
        case Objective::max_avg_efficiency:
            return run_cyclic(spec, threads).average_efficiency;
        case Objective::max_target_p0_content:
            return std::norm(radial_coefficients(spec.target_l, spec.source_waist, spec.cavity_waist, 0)[0]);
    }
    throw InvalidArgument("unknown objective");
}

namespace {

std::string describe_point(const std::vector<ParamBounds>& free, const std::vector<double>& x)
{
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < free.size(); ++i) {
        os << (i ? ", " : "") << to_string(free[i].param) << " = " << x[i];
    }
    return os.str();
}

class Search {
public:
    Search(const CircuitSpec& base, const OptimizeSettings& s) : base_(base), s_(s) {}

    double eval(const std::vector<double>& x)
    {
        double f = 0.0;
        try {
            f = evaluate_objective(apply_params(base_, s_.free, x), s_.objective, s_.separation_p_max, s_.threads);
        }
        catch (const NumericalError& e) {
            throw NumericalError("objective failed at " + describe_point(s_.free, x) + ": " + e.what());
        }
        record(x, f);
        return f;
    }

    void record(const std::vector<double>& x, double f)
    {
        if (!std::isfinite(f)) {
            throw NumericalError("objective " + to_string(s_.objective) + " is not finite at " +
                                 describe_point(s_.free, x));
        }
        if (trace_.empty() || f > best_f_) {
            best_f_ = f;
            best_x_ = x;
        }
        trace_.push_back({static_cast<int>(trace_.size()), x, f, best_f_});
    }

    std::vector<TraceEntry> trace_;
    std::vector<double> best_x_;
    double best_f_ = -std::numeric_limits<double>::infinity();

private:
    const CircuitSpec& base_;
    const OptimizeSettings& s_;
};

double clamp_to(const ParamBounds& b, double v) { return std::clamp(v, b.lower, b.upper); }

}  // namespace

DesignResult optimize_design(const CircuitSpec& base, const OptimizeSettings& settings)
{
    settings.validate();
    base.validate();
    Search search(base, settings);
    const std::size_t dims = settings.free.size();

    if (dims == 0) {
        const CircuitSpec spec = tune_to_target(base);
        const double f = search.eval({});
        return {spec, {}, f, search.trace_, 0.0};
    }

    // Coarse tensor grid, evaluated in parallel into per-point slots.
    const auto pts = static_cast<std::size_t>(settings.coarse_points);
    std::size_t total = 1;
    for (std::size_t d = 0; d < dims; ++d) {
        total *= pts;
    }
    std::vector<std::vector<double>> grid(total, std::vector<double>(dims));
    for (std::size_t k = 0; k < total; ++k) {
        std::size_t rem = k;
        for (std::size_t d = 0; d < dims; ++d) {
            const auto& b = settings.free[d];
            const std::size_t i = rem % pts;
            rem /= pts;
            grid[k][d] = i + 1 == pts ? b.upper : b.lower + (b.upper - b.lower) * static_cast<double>(i) / (pts - 1);
        }
    }
    std::vector<double> values(total);
    parallel_for(total, settings.threads, [&](std::size_t k) {
        try {
            values[k] = evaluate_objective(apply_params(base, settings.free, grid[k]), settings.objective,
                                           settings.separation_p_max, 1);
        }
        catch (const NumericalError& e) {
            throw NumericalError("objective failed at " + describe_point(settings.free, grid[k]) + ": " + e.what());
        }
    });
    for (std::size_t k = 0; k < total; ++k) {
        search.record(grid[k], values[k]);
    }

    // Golden-section refinement one coordinate at a time around the incumbent.
    constexpr double kInvPhi = 0.6180339887498949;
    std::vector<double> step(dims);
    for (std::size_t d = 0; d < dims; ++d) {
        step[d] = (settings.free[d].upper - settings.free[d].lower) / (pts - 1);
    }
    double tolerance = 0.0;
    for (int sweep = 0; sweep < settings.sweeps; ++sweep) {
        for (std::size_t d = 0; d < dims; ++d) {
            const auto& b = settings.free[d];
            std::vector<double> x = search.best_x_;
            double lo = clamp_to(b, x[d] - step[d]);
            double hi = clamp_to(b, x[d] + step[d]);
            auto at = [&](double v) {
                x[d] = v;
                return search.eval(x);
            };
            double c = hi - kInvPhi * (hi - lo);
            double e = lo + kInvPhi * (hi - lo);
            double fc = at(c);
            double fe = at(e);
            for (int it = 0; it < settings.golden_iterations; ++it) {
                if (fc >= fe) {
                    hi = e;
                    e = c;
                    fe = fc;
                    c = hi - kInvPhi * (hi - lo);
                    fc = at(c);
                }
                else {
                    lo = c;
                    c = e;
                    fc = fe;
                    e = lo + kInvPhi * (hi - lo);
                    fe = at(e);
                }
            }
            step[d] = std::max(hi - lo, 1e-3 * step[d]);
            if (sweep + 1 == settings.sweeps) {
                tolerance = std::max(tolerance, hi - lo);
            }
        }
    }

    DesignResult result;
    result.params = search.best_x_;
    result.objective = search.best_f_;
    result.spec = apply_params(base, settings.free, result.params);
    result.trace = std::move(search.trace_);
    result.refinement_tolerance = tolerance;
    return result;
}

}  // namespace oamsim
