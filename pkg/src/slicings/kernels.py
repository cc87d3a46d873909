"""Kernel series for mobiles and blossoming trees, plus Lagrange extraction.

Two families of fixed-point series are computed here, for each order p >= 2:

* ``compute_Rp``: the unique series with
      R_p = t + sum_{i>=1} x_i * C(pi-1, i) * R_p^{(p-1)i},
  the generating series of corner-rooted p-mobiles (t marks round vertices,
  x_i marks branch nodes of degree p*i).  ``compute_R`` is the p = 2 case.

* ``compute_Tp``: the series of rooted blossoming p-trees, computed from its
  own decomposition
      T_p = t + sum_{i>=1} (p-1) * x_i * C(pi-1, i-1) * T_p^{(p-1)i}.
  The identity (p-1)*C(pi-1, i-1) = C(pi-1, i) makes T_p = R_p termwise; the
  test suite asserts it, the code deliberately does not reuse it.

``lagrange_coeff`` extracts single coefficients of R_p^s through
Lagrange-Buermann inversion applied to t = z - A(z), completely independent
of the fixed-point path, which is what makes it usable as an oracle against
``compute_Rp``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping, Tuple

from .exactnum import binomial, multinomial
from .series import Monomial, Series, TruncationSpec, solve_fixpoint

_KERNEL_CACHE: Dict[Tuple, Series] = {}


def kernel_var_max(p: int, t_max: int) -> int:
    """Largest variable index that can contribute to t-degree <= t_max.

    Every x_i summand carries at least t^{(p-1)i}, so indices beyond
    t_max // (p-1) are dead weight.
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    return max(1, t_max // (p - 1))


def _powers_table(base: Series, exponents: list[int]) -> Dict[int, Series]:
    """base**e for each requested exponent, sharing intermediate products."""
    table: Dict[int, Series] = {}
    need = sorted(set(exponents))
    cur = Series.one(base.trunc)
    k = 0
    for e in need:
        while k < e:
            cur = cur * base
            k += 1
        table[e] = cur
    return table


def _sum_update(trunc: TruncationSpec, coeff_of_i, exp_of_i):
    """Update map X -> t + sum_i coeff(i) * x_i * X^{exp(i)} under trunc."""
    t_series = Series.t_power(trunc, 1)
    xs = {i: Series.x_var(trunc, i) for i in range(1, trunc.var_max + 1)}

    def update(x: Series) -> Series:
        exps = [exp_of_i(i) for i in range(1, trunc.var_max + 1)]
        powers = _powers_table(x, exps)
        acc = t_series
        for i in range(1, trunc.var_max + 1):
            c = coeff_of_i(i)
            if c == 0:
                continue
            acc = acc + (xs[i] * powers[exp_of_i(i)]).scale(c)
        return acc

    return update


def compute_Rp(p: int, trunc: TruncationSpec) -> Series:
    """Fixed point of X = t + sum_i x_i C(pi-1, i) X^{(p-1)i}."""
    if p < 2:
        raise ValueError("p must be at least 2")
    key = ("R", p, trunc)
    if key not in _KERNEL_CACHE:
        update = _sum_update(
            trunc,
            lambda i: binomial(p * i - 1, i),
            lambda i: (p - 1) * i,
        )
        _KERNEL_CACHE[key] = solve_fixpoint(update, trunc)
    return _KERNEL_CACHE[key]


def compute_R(trunc: TruncationSpec) -> Series:
    return compute_Rp(2, trunc)


def compute_Tp(p: int, trunc: TruncationSpec) -> Series:
    """Fixed point of X = t + sum_i (p-1) x_i C(pi-1, i-1) X^{(p-1)i}."""
    if p < 2:
        raise ValueError("p must be at least 2")
    key = ("T", p, trunc)
    if key not in _KERNEL_CACHE:
        update = _sum_update(
            trunc,
            lambda i: (p - 1) * binomial(p * i - 1, i - 1),
            lambda i: (p - 1) * i,
        )
        _KERNEL_CACHE[key] = solve_fixpoint(update, trunc)
    return _KERNEL_CACHE[key]


def compute_T(trunc: TruncationSpec) -> Series:
    return compute_Tp(2, trunc)


def compute_S(trunc: TruncationSpec) -> Series:
    """S = sum_i x_i C(2i-1, i) R^{i-1}, the series with R = t + R*S."""
    r = compute_R(trunc)
    exps = list(range(0, trunc.var_max))
    powers = _powers_table(r, exps)
    acc = Series.zero(trunc)
    for i in range(1, trunc.var_max + 1):
        term = Series.x_var(trunc, i) * powers[i - 1]
        acc = acc + term.scale(binomial(2 * i - 1, i))
    return acc


def rp_power(p: int, trunc: TruncationSpec, s: int) -> Series:
    """R_p^s with the power table cached per (p, trunc)."""
    key = ("Rpow", p, trunc, s)
    if key not in _KERNEL_CACHE:
        base = compute_Rp(p, trunc)
        lower = _KERNEL_CACHE.get(("Rpow", p, trunc, s - 1))
        if s == 0:
            _KERNEL_CACHE[key] = Series.one(trunc)
        elif lower is not None:
            _KERNEL_CACHE[key] = lower * base
        else:
            _KERNEL_CACHE[key] = base ** s
    return _KERNEL_CACHE[key]


def lagrange_coeff(p: int, s: int, n: int, profile: Mapping[int, int]) -> Fraction:
    """[t^n * prod x_i^{n_i}] R_p^s by Lagrange-Buermann inversion.

    Writing R_p as the compositional inverse of psi(z) = z - A(z) with
    A(z) = sum_i x_i C(pi-1, i) z^{(p-1)i}, the classical formula gives

        [t^n] R_p^s = (s/n) [z^{n-s}] (1 - A(z)/z)^{-n}.

    Expanding (1 - u)^{-n} = sum_k C(n+k-1, k) u^k and picking the x-profile
    part of u^K (K = sum n_i) leaves a single multinomial term; its z-degree
    must equal n - s, otherwise the coefficient is 0.
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    if s < 1:
        raise ValueError("s must be a positive integer")
    if n < 0:
        raise ValueError("n must be nonnegative")
    counts = []
    z_deg = 0
    prod_c = 1
    for i, ni in profile.items():
        if ni < 0 or i < 1:
            raise ValueError("profile entries must map indices >= 1 to counts >= 0")
        if ni == 0:
            continue
        counts.append(ni)
        z_deg += ni * ((p - 1) * i - 1)
        prod_c *= binomial(p * i - 1, i) ** ni
    big_k = sum(counts)
    if n == 0:
        # R_p has no constant term, so neither does any positive power.
        return Fraction(0)
    if z_deg != n - s:
        return Fraction(0)
    value = Fraction(s, n) * binomial(n + big_k - 1, big_k) * multinomial(counts) * prod_c
    return value
