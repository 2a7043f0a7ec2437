#!/usr/bin/env python3
"""Independent high-precision reference values for the test suites.

Everything here is evaluated with mpmath (arbitrary precision Laguerre
polynomials and adaptive quadrature), sharing no code with the C++ library.
Run it to regenerate tests/frozen_values.hpp.
"""
import os
import mpmath as mp

mp.mp.dps = 40
C_LIGHT = mp.mpf(299792458)


def lg_radial(p, a, w, r):
    pre = mp.sqrt(2 * mp.factorial(p) / (mp.pi * w**2 * mp.factorial(p + a)))
    x = 2 * r**2 / w**2
    return pre * (mp.sqrt(2) * r / w) ** a * mp.laguerre(p, a, x) * mp.exp(-r**2 / w**2)


def vortex_radial(w, r):
    return mp.sqrt(2 / mp.pi) / w * mp.exp(-r**2 / w**2)


def radial_overlap(f, g, rmax):
    # split the range so the oscillating Laguerre factors are well resolved
    pts = mp.linspace(0, rmax, 33)
    return 2 * mp.pi * mp.quad(lambda r: f(r) * g(r) * r, pts)


def focused_coefficient(p, a, source_w, basis_w):
    rmax = 12 * max(source_w, basis_w) * max(1, mp.sqrt(p + a + 1) / 2)
    return radial_overlap(lambda r: lg_radial(p, a, source_w, r),
                          lambda r: vortex_radial(basis_w, r), rmax)


def lg_overlap(p1, w1, p2, w2, a):
    rmax = 12 * max(w1, w2) * max(1, mp.sqrt(max(p1, p2) + a + 1) / 2)
    return radial_overlap(lambda r: lg_radial(p1, a, w1, r),
                          lambda r: lg_radial(p2, a, w2, r), rmax)


def cpp_array(name, values):
    body = ",\n    ".join(mp.nstr(v, 20) for v in values)
    return f"inline constexpr double {name}[] = {{\n    {body}}};\n"


def main():
    out = []
    um = mp.mpf("1e-6")

    # u_{1,2}(w=60um, r=30um, theta=pi/4) = i * Im part only (exp(-2i*pi/4) = -i)
    u = lg_radial(1, 2, 60 * um, 30 * um) * mp.exp(-2j * mp.pi / 4)
    out.append(f"inline constexpr double kLgP1L2Real = {mp.nstr(mp.re(u), 20)};\n")
    out.append(f"inline constexpr double kLgP1L2Imag = {mp.nstr(mp.im(u), 20)};\n")

    v = vortex_radial(50 * um, 25 * um) * mp.exp(-3j * mp.pi)
    out.append(f"inline constexpr double kVortexL3Real = {mp.nstr(mp.re(v), 20)};\n")
    out.append(f"inline constexpr double kVortexL3Imag = {mp.nstr(mp.im(v), 20)};\n")

    w = 50 * um
    for a in (1, 2, 3):
        out.append(cpp_array(f"kEqualWaistL{a}", [focused_coefficient(p, a, w, w) for p in range(11)]))

    out.append(cpp_array("kCrossL3Source25Basis50",
                         [focused_coefficient(p, 3, 25 * um, 50 * um) for p in range(11)]))
    out.append(cpp_array("kCrossL1Source25Basis50",
                         [focused_coefficient(p, 1, 25 * um, 50 * um) for p in range(11)]))
    out.append(cpp_array("kCrossL0Source25Basis50",
                         [focused_coefficient(p, 0, 25 * um, 50 * um) for p in range(11)]))

    out.append(f"inline constexpr double kOverlapL2HalfWaist = "
               f"{mp.nstr(lg_overlap(0, w, 0, w / 2, 2), 20)};\n")

    gauss_half = [lg_overlap(p, w / 2, 0, w, 0) for p in range(21)]
    out.append(cpp_array("kGaussianToHalfWaist", gauss_half))
    out.append(f"inline constexpr double kGaussianToHalfWaistPower = "
               f"{mp.nstr(mp.fsum(c**2 for c in gauss_half), 20)};\n")

    # measured operating point: fsr 7.90 GHz, n = 1.453, R2 = 25 mm, laser on the
    # (p=0, l=3) resonance nearest 794.9693 nm
    fsr = mp.mpf("7.90e9")
    n = mp.mpf("1.453")
    optical = C_LIGHT / (2 * fsr)
    geometric = optical / n
    phi = mp.acos(mp.sqrt(1 - geometric / mp.mpf("0.025")))
    nu_nominal = C_LIGHT / mp.mpf("794.9693e-9")
    q = mp.nint(nu_nominal / fsr - 4 * phi / mp.pi)
    nu_laser = fsr * (q + 4 * phi / mp.pi)
    x = nu_laser / fsr - phi / mp.pi
    q0 = mp.ceil(x - mp.mpf(0.5))
    det_hz = (x - q0) * fsr
    out.append(f"inline constexpr double kGouyPhaseMeasured = {mp.nstr(phi, 20)};\n")
    out.append(f"inline constexpr double kFundamentalDetuningHz = {mp.nstr(det_hz, 20)};\n")
    out.append(f"inline constexpr double kTargetQ = {mp.nstr(q, 20)};\n")

    # waist-scan: on-resonance FP1 transmission of l = 3 (own p = 0 resonance)
    hwhm = mp.mpf("287e6") / 2
    def transmission(source_w):
        total = 0
        for p in range(11):
            c = focused_coefficient(p, 3, source_w, 50 * um)
            off = 2 * p * phi / mp.pi
            off = off - mp.nint(off)
            if abs(abs(off) - mp.mpf(0.5)) < mp.mpf("1e-30"):
                off = -abs(off)
            d = off * fsr
            total += c**2 / (1 + (d / hwhm) ** 2)
        return total
    t25 = transmission(25 * um)
    t50 = transmission(50 * um)
    out.append(f"inline constexpr double kWaistScanL3At25 = {mp.nstr(t25, 20)};\n")
    out.append(f"inline constexpr double kWaistScanL3At50 = {mp.nstr(t50, 20)};\n")

    header = ("// Generated by tests/oracles/generate_frozen.py (mpmath, 40 digits).\n"
              "// Do not edit by hand.\n#pragma once\n\nnamespace frozen {\n\n")
    path = os.path.join(os.path.dirname(__file__), "..", "frozen_values.hpp")
    with open(path, "w") as fh:
        fh.write(header + "\n".join(out) + "\n}  // namespace frozen\n")


if __name__ == "__main__":
    main()
