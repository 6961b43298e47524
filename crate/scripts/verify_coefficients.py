#!/usr/bin/env python3
"""High-precision check of the eigenvalue correction coefficients.

Solves the quantization condition with mpmath at 60 digits and prints the
residual  E_n - E_bohr - (correction terms)  for two candidate coefficient
sets:

* candidate A:  P442 = +(pi/256) (w- sin x + w+ sin y) S,  P552 = S^2/256
* candidate B:  P442 = -(pi/256) (w- sin x + w+ sin y) S,  P552 = -S^2/128
  (the set used by the library)

with S = w-^2 cos x + w+^2 cos y, x = pi E/(hbar w-), y = pi E/(hbar w+).
With the correct candidate the residual decays like E^(-11/2) (the first omitted
order); with the wrong one it stalls at E^(-5).

A second table fixes the denominator D of the flat-bottom term
sqrt(m) l/(D sqrt 2) S^2 h^6/(E^(11/2) T^3): the candidate-B residual (without
that term) is least-squares fitted as c times the D=512 term over 40
consecutive levels near E = 4.3 * 3; c tends to 1 for D = 512 and to 1/2
for D = 1024 as hbar -> 0.

Usage: python3 scripts/verify_coefficients.py      (needs mpmath)
"""

import math

import mpmath as mp

mp.mp.dps = 60
QUARTER = mp.mpf(1) / 4


def cap_f(z):
    return mp.gamma(z + 3 * QUARTER) / (mp.gamma(z + QUARTER) * mp.sqrt(z))


def remainder(z):
    """r(z) = theta(z) - pi (z - 1/4) in closed form."""
    phi = mp.pi * (z - QUARTER)
    f = cap_f(z)
    s, c = mp.sin(phi), mp.cos(phi)
    return mp.atan((f - 1) * s * c / (c * c + f * s * s))


def terms(n, m, wm, wp, ell, hb):
    tau = mp.pi / wm + mp.pi / wp
    a = mp.sqrt(2 * m) * ell
    w = 2 * mp.pi * hb * (n + mp.mpf(1) / 2)
    u = w / (a + mp.sqrt(a * a + tau * w))
    eb = u * u

    def g(d):
        e = eb + d
        shift = d * (2 * a / (mp.sqrt(e) + mp.sqrt(eb)) + tau) / (2 * hb)
        return shift + remainder(e / (2 * hb * wm)) + remainder(e / (2 * hb * wp))

    delta = mp.findroot(g, mp.mpf(0))
    x, y = mp.pi * eb / (hb * wm), mp.pi * eb / (hb * wp)
    sig = wm**2 * mp.cos(x) + wp**2 * mp.cos(y)
    t = a / mp.sqrt(eb) + tau
    p441 = -5 * (wm**4 * mp.cos(x) + wp**4 * mp.cos(y)) / 128 + (
        wm**4 * mp.sin(2 * x) + wp**4 * mp.sin(2 * y)
    ) / 1024
    p442 = mp.pi / 256 * (wm * mp.sin(x) + wp * mp.sin(y)) * sig
    return {
        "E": eb,
        "delta": delta,
        "221": hb**3 / (eb**2 * t) * sig / 16,
        "441": hb**5 / (eb**4 * t) * p441,
        "442": hb**5 / (eb**4 * t**2) * p442,
        "552": hb**6 / (eb**5 * t**2) * sig**2 / 256,
        "flat512": hb**6 / (eb ** mp.mpf(5.5) * t**3) * mp.sqrt(m) * ell / (512 * mp.sqrt(2)) * sig**2,
    }


def residuals(v):
    base = v["delta"] - v["221"] - v["441"]
    cand_a = base - v["442"] - v["552"]
    cand_b = base + v["442"] + 2 * v["552"]
    return cand_a, cand_b


def main():
    print("ell = 0, w- = 1, w+ = 2, hbar = 1: residual after the j <= 5 terms")
    print(f"{'n':>6} {'E':>10} {'candidate A':>14} {'candidate B':>14}")
    for n in [50, 100, 200, 400, 800, 1600]:
        v = terms(n, 1, 1, 2, 0, 1)
        cand_a, cand_b = residuals(v)
        print(f"{n:>6} {mp.nstr(v['E'], 8):>10} {mp.nstr(cand_a, 4):>14} {mp.nstr(cand_b, 4):>14}")

    print("\nell = 1: fitted multiple c of the D=512 flat-bottom term")
    print(f"{'hbar':>8} {'levels':>16} {'c':>10}")
    for hb in [mp.mpf("1e-3"), mp.mpf("1e-4"), mp.mpf("2.5e-5")]:
        n0 = int(4.3 / (2 * math.pi * float(hb)) * 3)
        num = den = mp.mpf(0)
        for n in range(n0, n0 + 40):
            v = terms(n, 1, 1, 2, 1, hb)
            _, cand_b = residuals(v)
            num += cand_b * v["flat512"]
            den += v["flat512"] ** 2
        print(f"{float(hb):>8.1e} {n0:>7}..{n0 + 40:<8} {mp.nstr(num / den, 5):>10}")

if __name__ == "__main__":
    main()
