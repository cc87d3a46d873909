"""Boundary generating functions and closed-form counts.

For p >= 2 and boundary degrees (l_1, ..., l_r) with sum divisible by p and
none or exactly two l_i not divisible by p, the series of p-hypermaps with r
numbered, corner-marked boundary faces of those degrees (t marking vertices,
x_i marking non-boundary faces of degree p*i) is

    G = prod_i alpha(l_i) * (c/s) * d^{r-2}/dt^{r-2} ( R_p^s ),

with alpha(l) = l! / (floor(l/p)! * (l - floor(l/p) - 1)!), s = (p-1)/p * sum l_i,
and c = 1 when every l_i is divisible by p, else c = p - 1.  For r = 1 the
negative derivative order means one t-antiderivative with constant 0 (every
map has at least one vertex, so G(t=0) = 0).

Setting t = 1, x = 0 collapses G to the closed-form count of such maps with
no internal faces, implemented directly in :func:`slicings_count`.

``eynard_two``/``eynard_three`` evaluate independent expressions for the two-
and three-boundary series (a j-sum for two boundaries, a derivative product
for three) used by the verification suites as cross-checks of ``gf_boundaries``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .exactnum import factorial
from .kernels import compute_Rp, rp_power
from .series import Series, TruncationSpec


class BoundaryParityError(ValueError):
    """Boundary degrees outside the supported parity classes."""


@dataclass(frozen=True)
class BoundarySpec:
    """Hypermap order p plus ordered boundary degrees l_1..l_r.

    Degrees are kept in caller order; every formula here is symmetric in
    them, so no canonical sorting is imposed.
    """

    p: int
    degrees: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.p < 2:
            raise BoundaryParityError(f"p must be at least 2, got {self.p}")
        if len(self.degrees) < 1:
            raise BoundaryParityError("at least one boundary degree is required")
        if any(l < 1 for l in self.degrees):
            raise BoundaryParityError("boundary degrees must be positive")
        total = sum(self.degrees)
        if total % self.p != 0:
            raise BoundaryParityError(
                f"boundary degrees sum to {total}, not a multiple of p={self.p}"
            )
        k = self.non_multiple_count()
        if k not in (0, 2):
            raise BoundaryParityError(
                "unsupported boundary parity: "
                f"{k} boundary degrees are not divisible by p={self.p}; only 0 or 2 "
                "are supported (no product formula is known for four or more odd "
                "boundaries, that case is open)"
            )

    def non_multiple_count(self) -> int:
        return sum(1 for l in self.degrees if l % self.p != 0)

    @property
    def r(self) -> int:
        return len(self.degrees)


@dataclass(frozen=True)
class DerivedQuantities:
    """Edge/face/vertex bookkeeping forced by a BoundarySpec.

    epsilon: edges; d: dark faces; s = epsilon - d; v: vertices of the maps
    counted by slicings_count; c: the parity constant (1 or p-1).  For p = 2
    the classical edge count is e = epsilon / 2 and v = e - r + 2.
    """

    s: int
    epsilon: int
    d: int
    v: int
    c: int

    @property
    def e_classical(self) -> int:
        return self.epsilon // 2


def derived_quantities(spec: BoundarySpec) -> DerivedQuantities:
    total = sum(spec.degrees)
    p = spec.p
    d = total // p
    s = total - d  # (p-1)/p * total
    epsilon = total
    if p == 2:
        # Classical maps: each degree-2 dark face is an edge blown open,
        # so edges number total/2 and vertices e - r + 2.
        e = total // 2
        v = e - spec.r + 2
    else:
        v = epsilon - d - spec.r + 2
    c = 1 if spec.non_multiple_count() == 0 else p - 1
    return DerivedQuantities(s=s, epsilon=epsilon, d=d, v=v, c=c)


def alpha(p: int, l: int) -> int:
    """alpha(l) = l! / (floor(l/p)! * (l - floor(l/p) - 1)!)."""
    if p < 2 or l < 1:
        raise ValueError("alpha requires p >= 2 and l >= 1")
    q = l // p
    value = factorial(l) // (factorial(q) * factorial(l - q - 1))
    return value


def slicings_count(spec: BoundarySpec) -> int:
    """Exact number of p-hypermaps whose faces are exactly the r numbered,
    corner-marked boundaries (plus degree-p dark faces for p >= 3)."""
    der = derived_quantities(spec)
    if der.v < 1:
        raise ValueError(f"spec forces vertex count {der.v} < 1")
    if spec.p == 2:
        num = factorial(der.e_classical - 1)
    else:
        num = factorial(der.epsilon - der.d - 1)
    value = Fraction(der.c * num, factorial(der.v))
    for l in spec.degrees:
        value *= alpha(spec.p, l)
    assert value.denominator == 1
    return int(value)


def gf_boundaries(spec: BoundarySpec, trunc: TruncationSpec) -> Series:
    """The boundary series G for ``spec`` under ``trunc``.

    For r >= 3 the result's t_max is the input's minus (r - 2), one per
    derivative; request t_max >= wanted order + (r - 2).
    """
    der = derived_quantities(spec)
    base = rp_power(spec.p, trunc, der.s)
    if spec.r == 1:
        series = base.integrate_dt()
    else:
        series = base
        for _ in range(spec.r - 2):
            series = series.d_dt()
    const = Fraction(der.c, der.s)
    for l in spec.degrees:
        const *= alpha(spec.p, l)
    return series.scale(const)


def eynard_two(l1: int, l2: int, trunc: TruncationSpec) -> Series:
    """Two-boundary series from the explicit j-sum (classical maps, p = 2).

    With g^2 = R the g-power prefactor is R^{(l1+l2)/2}; the j-sum runs over
    j = 0..floor(l2/2), terms with a negative factorial argument vanishing.
    """
    if (l1 + l2) % 2 != 0:
        raise BoundaryParityError("l1 + l2 must be even")
    if l1 < 1 or l2 < 1:
        raise BoundaryParityError("boundary degrees must be positive")
    s = (l1 + l2) // 2
    const = Fraction(0)
    for j in range(l2 // 2 + 1):
        a = (l1 - l2) // 2 + j
        if a < 0:
            continue
        const += Fraction(
            (l2 - 2 * j) * factorial(l1) * factorial(l2),
            factorial(j) * factorial(a) * factorial(s - j) * factorial(l2 - j),
        )
    return rp_power(2, trunc, s).scale(const)


def eynard_three(l1: int, l2: int, l3: int, trunc: TruncationSpec) -> Series:
    """Three-boundary series alpha(l1) alpha(l2) alpha(l3) R' R^{s-1} (p = 2).

    This is the g-power expression with g^{sum-1}/y'(1) rewritten as
    R^{s-1} R', so no square roots ever appear.  The result's t_max is one
    lower than the input's (one derivative).
    """
    ls = (l1, l2, l3)
    if any(l < 1 for l in ls):
        raise BoundaryParityError("boundary degrees must be positive")
    if sum(1 for l in ls if l % 2) not in (0, 2):
        raise BoundaryParityError("number of odd boundary degrees must be 0 or 2")
    s = sum(ls) // 2
    r_series = compute_Rp(2, trunc)
    deriv = r_series.d_dt()
    base = rp_power(2, trunc, s - 1).restrict(deriv.trunc)
    const = 1
    for l in ls:
        const *= alpha(2, l)
    return (base * deriv).scale(const)


def rooted_maps_gf(p: int, trunc: TruncationSpec) -> Series:
    """Antiderivative of (p/(p-1)) R_p with constant term 0.

    For p = 2 this is the rooted bipartite map series M with M' = 2R: for any
    monomial with at least one x factor, the coefficient of t^v x-profile
    counts corner-rooted bipartite maps with v vertices whose face degrees
    (all faces, root face included) match the profile.  The x-free part is
    the single formal term (p/(2(p-1))) t^2 left by the integration; it
    corresponds to no map and should be read through the defining identity
    d/dt rooted_maps_gf = (p/(p-1)) R_p, which holds exactly.
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    rp = compute_Rp(p, trunc)
    return rp.scale(Fraction(p, p - 1)).integrate_dt()
