#!/usr/bin/env python3
"""Regenerates tests/reference_values.hpp.

Every frozen constant in the test suite comes from this script: quantiles of
the trap eigenstate densities, exact stencil weights, and potential/force
values on a small probe ensemble. Everything is recomputed from scratch with
mpmath (40 significant digits) and exact Fractions; the script deliberately
does not import or call the library under test, so the two sides can only
agree by computing the same mathematics.

Usage: python3 tools/reference_values.py > tests/reference_values.hpp
"""

import math
from fractions import Fraction

import mpmath as mp

mp.mp.dps = 40

SQRT2 = mp.sqrt(2)
KAPPA = 2 * mp.pi**2          # hbar^2 / (8 m) with hbar = 4 pi, m = 1
OMEGA = 2 * mp.pi
MEAN_TARGET = 4 * mp.pi**2    # hbar * omega / 2


# ---------------------------------------------------------------- densities

def phi(x):
    return mp.exp(-x * x / 2) / mp.sqrt(2 * mp.pi)


def ground_cdf(x):
    return (1 + mp.erf(x / SQRT2)) / 2


def ground_quantile(u):
    return SQRT2 * mp.erfinv(2 * u - 1)


def excited_cdf(x):
    # d/dx [Phi(x) - x phi(x)] = x^2 phi(x)
    return ground_cdf(x) - x * phi(x)


def excited_quantile(u):
    lo, hi = mp.mpf(-12), mp.mpf(12)
    for _ in range(200):
        mid = (lo + hi) / 2
        if excited_cdf(mid) < u:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def sample(quantile, n):
    xs = [None] * n
    for i in range(n // 2):
        xs[i] = quantile(mp.mpf(2 * i + 1) / (2 * n))
        xs[n - 1 - i] = -xs[i]
    if n % 2 == 1:
        xs[n // 2] = mp.mpf(0)
    return xs


# ------------------------------------------------------------------ stencils

def solve_fraction(a, b):
    """Gaussian elimination over Fractions; a is square, b a list of columns."""
    n = len(a)
    m = [row[:] + [col[i] for col in b] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[pivot] = m[pivot], m[col]
        inv = Fraction(1) / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [v - f * p for v, p in zip(m[r], m[col])]
    return [[m[r][n + k] for r in range(n)] for k in range(len(b))]


def stencil_weights(offsets, order):
    """Columns l = 1..order of the moment conditions
    sum_c alpha_{c,l} c^k = l! delta_{kl}, k = 1..order."""
    c_count = len(offsets)
    rows = [[Fraction(c) ** k for c in offsets] for k in range(1, order + 1)]
    rhs = []
    for l in range(1, order + 1):
        col = [Fraction(0)] * order
        col[l - 1] = Fraction(math.factorial(l))
        rhs.append(col)
    if c_count == order:
        cols = solve_fraction(rows, rhs)
    else:
        # minimum-norm solution alpha = A^T (A A^T)^{-1} rhs
        aat = [[sum(rows[i][c] * rows[j][c] for c in range(c_count))
                for j in range(order)] for i in range(order)]
        ys = solve_fraction(aat, rhs)
        cols = [[sum(rows[k][c] * y[k] for k in range(order)) for c in range(c_count)]
                for y in ys]
    # transpose to rows-by-offset
    return [[cols[l][c] for l in range(order)] for c in range(c_count)]


def symmetric_offsets(half):
    return [c for c in range(-half, half + 1) if c != 0]


# --------------------------------------------------- interworld potentials

def toy_energy(xs):
    n = len(xs)
    r = [1 / (xs[i + 1] - xs[i]) for i in range(n - 1)]
    total = mp.mpf(0)
    for i in range(n):
        left = r[i - 1] if i - 1 >= 0 else mp.mpf(0)
        here = r[i] if i <= n - 2 else mp.mpf(0)
        total += (here - left) ** 2
    return KAPPA * total


def rational_energy(xs, order):
    n = len(xs)
    offs = symmetric_offsets(order // 2)
    alpha = stencil_weights(offs, order)
    total = mp.mpf(0)
    for i in range(order // 2, n - order // 2):
        d1 = mp.mpf(0)
        d2 = mp.mpf(0)
        for k, c in enumerate(offs):
            diff = xs[i + c] - xs[i]
            d1 += mp.mpf(alpha[k][0].numerator) / alpha[k][0].denominator * diff
            d2 += mp.mpf(alpha[k][1].numerator) / alpha[k][1].denominator * diff
        total += (d2 / d1**2) ** 2
    return KAPPA * total


def equivariance_fit(xs, i):
    """Local-frame cubic through the four equal-area constraints around
    world i; returns (a, b, c, d) with P(xi) = a + b xi + c xi^2 + d xi^3."""
    n = len(xs)
    base = i - 2
    rel = [xs[base + j] - xs[i] for j in range(5)]
    k = mp.matrix(4, 4)
    for r in range(4):
        lo, hi = rel[r], rel[r + 1]
        for col in range(4):
            k[r, col] = (hi ** (col + 1) - lo ** (col + 1)) / (col + 1)
    rhs = mp.matrix([mp.mpf(1) / n] * 4)
    beta = mp.lu_solve(k, rhs)
    return beta[0], beta[1], beta[2], beta[3]


def equivariance_energy(xs):
    n = len(xs)
    total = mp.mpf(0)
    for i in range(2, n - 2):
        a, b, _, _ = equivariance_fit(xs, i)
        total += (b / a) ** 2
    return KAPPA * total


def forces_of(energy, xs):
    out = []
    for m in range(len(xs)):
        def shifted(t, m=m):
            ys = list(xs)
            ys[m] = t
            return energy(ys)
        out.append(-mp.diff(shifted, xs[m]))
    return out


# ------------------------------------------------------------------ output

def lit(v):
    return repr(float(v))


def emit_array(name, values, per_line=4):
    print(f"inline constexpr double {name}[{len(values)}] = {{")
    for i in range(0, len(values), per_line):
        chunk = ", ".join(lit(v) for v in values[i:i + per_line])
        print(f"    {chunk},")
    print("};")


def emit_scalar(name, value):
    print(f"inline constexpr double {name} = {lit(value)};")


def emit_exact_matrix(name, rows):
    c = len(rows)
    l = len(rows[0])
    print(f"inline constexpr const char* {name}[{c}][{l}] = {{")
    for row in rows:
        cells = ", ".join(f'"{f}"' for f in row)
        print(f"    {{{cells}}},")
    print("};")


def main():
    print("// Generated by tools/reference_values.py -- do not edit by hand.")
    print("// Regenerate with: python3 tools/reference_values.py > tests/reference_values.hpp")
    print("#pragma once")
    print()
    print("namespace refvals {")
    print()

    print("// Equal-weight quantiles u = (n - 1/2)/N of the dimensionless densities")
    print("// (ground: standard normal; excited: x^2 exp(-x^2/2)/sqrt(2 pi)),")
    print("// solved to 40 digits and rounded to the nearest double.")
    emit_array("kGroundN4", sample(ground_quantile, 4))
    emit_array("kGroundN5", sample(ground_quantile, 5))
    g50 = sample(ground_quantile, 50)
    emit_scalar("kGroundN50World1", g50[0])
    emit_scalar("kGroundN50World13", g50[12])
    emit_scalar("kGroundN50World25", g50[24])
    emit_array("kExcitedN6", sample(excited_quantile, 6))
    e40 = sample(excited_quantile, 40)
    emit_scalar("kExcitedN40World1", e40[0])
    emit_scalar("kExcitedN40World21", e40[20])
    emit_scalar("kExcitedN40NodeGap", e40[20] - e40[19])
    print()

    print("// Mean energy per world of the resting equal-weight ground sample under")
    print("// the nearest-neighbour interworld potential plus the harmonic trap,")
    print("// and its relative deviation from the continuum value 4 pi^2.")
    for n in (100, 1000):
        xs = sample(ground_quantile, n)
        e = toy_energy(xs) + sum(OMEGA**2 * x * x / 2 for x in xs)
        mean = e / n
        emit_scalar(f"kToyMeanEnergyN{n}", mean)
        emit_scalar(f"kToyEnergyRelDevN{n}", mean / MEAN_TARGET - 1)
    emit_scalar("kMeanEnergyTarget", MEAN_TARGET)
    print()

    print("// Derivative-extraction weights alpha[c][l] (rows by ascending offset,")
    print("// columns l = 1..L) from the exact Fraction solve of the moment")
    print("// conditions sum_c alpha_{c,l} c^k = l! delta_{lk}.")
    for order in (2, 4, 6):
        emit_exact_matrix(f"kStencilL{order}Exact",
                          stencil_weights(symmetric_offsets(order // 2), order))
    print("// minimum-norm weights for four offsets at order 2")
    emit_exact_matrix("kMinNormC4L2Exact", stencil_weights([-2, -1, 1, 2], 2))
    print()

    print("// Probe ensemble: irregular but well-separated positions. Potentials")
    print("// evaluated symbolically; forces are high-precision derivatives of the")
    print("// same expressions, so they are an implementation-independent gradient")
    print("// check.")
    probe = [mp.mpf(s) for s in ("-1.7", "-0.9", "-0.35", "0.2", "0.8", "1.45", "2.1")]
    emit_array("kProbe7", probe)
    emit_scalar("kProbe7ToyU", toy_energy(probe))
    emit_array("kProbe7ToyForces", forces_of(toy_energy, probe))
    emit_scalar("kProbe7RationalL2U", rational_energy(probe, 2))
    emit_array("kProbe7RationalL2Forces",
               forces_of(lambda xs: rational_energy(xs, 2), probe))
    emit_scalar("kProbe7RationalL4U", rational_energy(probe, 4))
    emit_array("kProbe7RationalL4Forces",
               forces_of(lambda xs: rational_energy(xs, 4), probe))
    emit_scalar("kProbe7EquivU", equivariance_energy(probe))
    emit_array("kProbe7EquivForces", forces_of(equivariance_energy, probe))

    a, b, c, d = equivariance_fit(probe, 3)
    s = probe[3]
    print("// global-frame cubic coefficients of the equal-area fit at world 4")
    emit_array("kProbe7EquivCoeffsW4",
               [a - b * s + c * s * s - d * s**3,
                b - 2 * c * s + 3 * d * s * s,
                c - 3 * d * s,
                d])
    emit_scalar("kProbe7EquivRatioW4", b / a)
    print()
    print("}  // namespace refvals")


if __name__ == "__main__":
    main()
