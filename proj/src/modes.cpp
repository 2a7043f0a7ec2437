#include "oamsim/modes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "oamsim/constants.hpp"
#include "oamsim/errors.hpp"

namespace oamsim {

namespace {

constexpr double kQuadratureTolerance = 1e-10;
constexpr int kQuadraturePanels = 16;
constexpr unsigned kQuadratureDepth = 8;
// Overlap integrals are dimensionless amplitudes of order one.
constexpr double kQuadratureAbsError = 1e-9;

void require_finite(double v, const char* what)
{
    if (!std::isfinite(v)) {
        throw InvalidArgument(std::string(what) + " must be finite");
    }
}

void require_positive(double v, const char* what)
{
    require_finite(v, what);
    if (v <= 0.0) {
        throw InvalidArgument(std::string(what) + " must be positive");
    }
}

// Adaptive Gauss-Kronrod over equal panels of [0, r_max]. Splitting keeps the
// Laguerre oscillations of high-p modes resolved at every refinement level.
template <class F>
double radial_quadrature(F&& f, double r_max)
{
    using boost::math::quadrature::gauss_kronrod;
    const double h = r_max / kQuadraturePanels;
    double total = 0.0;
    double error = 0.0;
    double l1 = 0.0;
    for (int k = 0; k < kQuadraturePanels; ++k) {
        double panel_error = 0.0;
        double panel_l1 = 0.0;
        total += gauss_kronrod<double, 61>::integrate(f, k * h, (k + 1) * h, kQuadratureDepth,
                                                      kQuadratureTolerance, &panel_error, &panel_l1);
        error += panel_error;
        l1 += panel_l1;
    }
    if (!std::isfinite(total) || error > kQuadratureAbsError) {
        throw NumericalError("radial quadrature did not converge (estimated error " + std::to_string(error) +
                             ", L1 norm " + std::to_string(l1) + ")");
    }
    return total;
}

double vortex_radial(double waist, double r)
{
    return std::sqrt(2.0 / kPi) / waist * std::exp(-r * r / (waist * waist));
}

}  // namespace

int ModeIndex::order() const { return 2 * p + std::abs(l); }

bool Truncation::contains(const ModeIndex& m) const { return m.p >= 0 && m.p <= p_max && std::abs(m.l) <= l_max; }

void Truncation::validate() const
{
    if (p_max < 0 || l_max < 0) {
        throw InvalidArgument("truncation limits must be non-negative");
    }
}

BeamParams::BeamParams(double waist_radius, double wavelength) : waist_(waist_radius), wavelength_(wavelength)
{
    require_positive(waist_radius, "waist_radius");
    require_positive(wavelength, "wavelength");
}

double BeamParams::rayleigh_range() const { return kPi * waist_ * waist_ / wavelength_; }

double BeamParams::beam_radius(double z) const
{
    const double ratio = z / rayleigh_range();
    return waist_ * std::sqrt(1.0 + ratio * ratio);
}

double generalized_laguerre(int n, double alpha, double x)
{
    if (n < 0) {
        throw InvalidArgument("Laguerre degree must be non-negative");
    }
    if (n == 0) {
        return 1.0;
    }
    double prev = 1.0;
    double cur = 1.0 + alpha - x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double lg_radial(int p, int abs_l, double waist, double r)
{
    if (p < 0 || abs_l < 0) {
        throw InvalidArgument("LG indices out of range");
    }
    require_finite(r, "r");
    if (r < 0.0) {
        throw InvalidArgument("r must be non-negative");
    }
    require_positive(waist, "waist");

    const double x = 2.0 * r * r / (waist * waist);
    double log_mag = 0.5 * (std::lgamma(p + 1.0) - std::lgamma(p + abs_l + 1.0)) - 0.5 * x;
    if (abs_l > 0) {
        if (x == 0.0) {
            return 0.0;
        }
        log_mag += 0.5 * abs_l * std::log(x);
    }
    const double value =
        std::sqrt(2.0 / kPi) / waist * std::exp(log_mag) * generalized_laguerre(p, static_cast<double>(abs_l), x);
    if (!std::isfinite(value)) {
        throw NumericalError("non-finite LG field value");
    }
    return value;
}

Complex lg_field_at_waist(const ModeIndex& m, const BeamParams& beam, double r, double theta)
{
    require_finite(theta, "theta");
    const double radial = lg_radial(m.p, std::abs(m.l), beam.waist_radius(), r);
    return std::polar(radial, -m.l * theta);
}

double gouy_phase(double z, double rayleigh_range)
{
    require_finite(z, "z");
    require_positive(rayleigh_range, "rayleigh_range");
    return std::atan(z / rayleigh_range);
}

Complex vortex_field(int l, double waist, double r, double theta)
{
    require_finite(r, "r");
    require_finite(theta, "theta");
    require_positive(waist, "waist");
    if (r < 0.0) {
        throw InvalidArgument("r must be non-negative");
    }
    return std::polar(vortex_radial(waist, r), -l * theta);
}

double radial_integration_limit(double max_waist, int max_p, int abs_l)
{
    // Outermost turning point of R_{p,|l|} sits at r = w sqrt(2p+|l|+1).
    const double turning = std::sqrt(2.0 * max_p + abs_l + 1.0);
    return max_waist * std::max(8.0, turning + 6.0);
}

std::vector<double> radial_coefficients_closed_form(int l, int p_max)
{
    if (p_max < 0) {
        throw InvalidArgument("p_max must be non-negative");
    }
    std::vector<double> c(static_cast<std::size_t>(p_max) + 1, 0.0);
    const int a = std::abs(l);
    if (a == 0) {
        c[0] = 1.0;
        return c;
    }
    const double half = 0.5 * a;
    const double common = std::lgamma(half + 1.0) - std::lgamma(half);
    for (int p = 0; p <= p_max; ++p) {
        const double log_c =
            std::lgamma(p + half) + common - 0.5 * (std::lgamma(p + 1.0) + std::lgamma(p + a + 1.0));
        c[static_cast<std::size_t>(p)] = std::exp(log_c);
    }
    return c;
}

std::vector<double> radial_coefficients_quadrature(int l, double source_waist, double basis_waist, int p_max)
{
    require_positive(source_waist, "source_waist");
    require_positive(basis_waist, "basis_waist");
    if (p_max < 0) {
        throw InvalidArgument("p_max must be non-negative");
    }
    const int a = std::abs(l);
    const double r_max = radial_integration_limit(std::max(source_waist, basis_waist), p_max, a);
    std::vector<double> c(static_cast<std::size_t>(p_max) + 1, 0.0);
    for (int p = 0; p <= p_max; ++p) {
        auto integrand = [&](double r) {
            return lg_radial(p, a, source_waist, r) * vortex_radial(basis_waist, r) * r;
        };
        c[static_cast<std::size_t>(p)] = 2.0 * kPi * radial_quadrature(integrand, r_max);
    }
    return c;
}

std::vector<Complex> radial_coefficients(int l, double source_waist, double basis_waist, int p_max)
{
    require_positive(source_waist, "source_waist");
    require_positive(basis_waist, "basis_waist");
    const std::vector<double> real = (source_waist == basis_waist)
                                         ? radial_coefficients_closed_form(l, p_max)
                                         : radial_coefficients_quadrature(l, source_waist, basis_waist, p_max);
    return {real.begin(), real.end()};
}

double lg_cross_overlap(int p1, double w1, int p2, double w2, int abs_l)
{
    require_positive(w1, "waist");
    require_positive(w2, "waist");
    const double r_max = radial_integration_limit(std::max(w1, w2), std::max(p1, p2), abs_l);
    auto integrand = [&](double r) { return lg_radial(p1, abs_l, w1, r) * lg_radial(p2, abs_l, w2, r) * r; };
    return 2.0 * kPi * radial_quadrature(integrand, r_max);
}

double lg_radial_overlap(int p1, int abs_l1, int p2, int abs_l2, double waist)
{
    require_positive(waist, "waist");
    const double r_max = radial_integration_limit(waist, std::max(p1, p2), std::max(abs_l1, abs_l2));
    auto integrand = [&](double r) { return lg_radial(p1, abs_l1, waist, r) * lg_radial(p2, abs_l2, waist, r) * r; };
    return 2.0 * kPi * radial_quadrature(integrand, r_max);
}

// ---------------------------------------------------------------------------

ModeSpectrum::ModeSpectrum(double basis_waist, double wavelength) : waist_(basis_waist), wavelength_(wavelength)
{
    require_positive(basis_waist, "basis_waist");
    require_positive(wavelength, "wavelength");
}

ModeSpectrum ModeSpectrum::pure(const ModeIndex& m, double basis_waist, double wavelength)
{
    ModeSpectrum s(basis_waist, wavelength);
    s.set(m, 1.0);
    return s;
}

Complex ModeSpectrum::amplitude(const ModeIndex& m) const
{
    const auto it = amps_.find(m);
    return it == amps_.end() ? Complex{} : it->second;
}

void ModeSpectrum::set(const ModeIndex& m, Complex a)
{
    if (m.p < 0) {
        throw InvalidArgument("radial index must be non-negative");
    }
    amps_[m] = a;
}

void ModeSpectrum::add(const ModeIndex& m, Complex a)
{
    if (m.p < 0) {
        throw InvalidArgument("radial index must be non-negative");
    }
    amps_[m] += a;
}

double ModeSpectrum::power() const
{
    double total = 0.0;
    for (const auto& [m, a] : amps_) {
        total += std::norm(a);
    }
    return total;
}

double ModeSpectrum::power_in_l(int l) const
{
    double total = 0.0;
    for (const auto& [m, a] : amps_) {
        if (m.l == l) {
            total += std::norm(a);
        }
    }
    return total;
}

std::set<int> ModeSpectrum::l_values() const
{
    std::set<int> out;
    for (const auto& [m, a] : amps_) {
        out.insert(m.l);
    }
    return out;
}

void ModeSpectrum::check_invariants(const Truncation& t) const
{
    for (const auto& [m, a] : amps_) {
        if (!t.contains(m)) {
            throw InvalidArgument("mode (p=" + std::to_string(m.p) + ", l=" + std::to_string(m.l) +
                                  ") outside truncation");
        }
    }
    if (power() > 1.0 + 1e-9) {
        throw InvalidArgument("spectrum power exceeds 1");
    }
}

ModeSpectrum& ModeSpectrum::operator*=(Complex factor)
{
    for (auto& [m, a] : amps_) {
        a *= factor;
    }
    return *this;
}

Complex mode_overlap(const ModeSpectrum& a, const ModeSpectrum& b)
{
    if (std::abs(a.wavelength() - b.wavelength()) > 1e-12 * a.wavelength()) {
        throw InvalidArgument("mode_overlap: wavelength mismatch");
    }
    Complex total{};
    if (a.basis_waist() == b.basis_waist()) {
        for (const auto& [m, amp] : a.amplitudes()) {
            total += std::conj(amp) * b.amplitude(m);
        }
        return total;
    }
    for (const auto& [ma, amp_a] : a.amplitudes()) {
        for (const auto& [mb, amp_b] : b.amplitudes()) {
            if (ma.l != mb.l || amp_a == Complex{} || amp_b == Complex{}) {
                continue;
            }
            const double g = lg_cross_overlap(ma.p, a.basis_waist(), mb.p, b.basis_waist(), std::abs(ma.l));
            total += std::conj(amp_a) * amp_b * g;
        }
    }
    return total;
}

RescaleResult rescale_waist(const ModeSpectrum& s, double new_basis_waist, int p_max, double warn_threshold)
{
    require_positive(new_basis_waist, "new_basis_waist");
    if (p_max < 0) {
        throw InvalidArgument("p_max must be non-negative");
    }
    if (new_basis_waist == s.basis_waist()) {
        return {s, 0.0, std::nullopt};
    }

    ModeSpectrum out(new_basis_waist, s.wavelength());
    for (const int l : s.l_values()) {
        const int a = std::abs(l);
        for (int q = 0; q <= p_max; ++q) {
            Complex acc{};
            for (const auto& [m, amp] : s.amplitudes()) {
                if (m.l != l || amp == Complex{}) {
                    continue;
                }
                acc += amp * lg_cross_overlap(q, new_basis_waist, m.p, s.basis_waist(), a);
            }
            out.set({q, l}, acc);
        }
    }
    RescaleResult result{out, s.power() - out.power(), std::nullopt};
    if (result.truncation_loss > warn_threshold) {
        result.warning = "waist rescaling lost " + std::to_string(result.truncation_loss) +
                         " of the power to p_max = " + std::to_string(p_max) + " truncation";
    }
    return result;
}

ModeSpectrum vortex_spectrum(int l, double source_waist, double basis_waist, double wavelength, int p_max)
{
    ModeSpectrum s(basis_waist, wavelength);
    const auto c = radial_coefficients(l, source_waist, basis_waist, p_max);
    for (int p = 0; p <= p_max; ++p) {
        s.set({p, l}, c[static_cast<std::size_t>(p)]);
    }
    return s;
}

}  // namespace oamsim
