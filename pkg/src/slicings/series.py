"""Truncated multivariate formal power series with exact rational coefficients.

Series live in Q[[t, x_1, ..., x_D]], truncated to ``t``-degree <= ``t_max``
and total x-degree <= ``xdeg_max``.  Every stored coefficient is exact for its
monomial; truncation only drops monomials beyond the bounds.  Each series
carries its :class:`TruncationSpec` and binary operations refuse to mix
truncations (mixing them silently is the classic way to corrupt
coefficients).

The one subtle contract: :meth:`Series.d_dt` returns a series whose ``t_max``
is one lower than its input's, because the top t-coefficient of a derivative
would need information beyond the input's truncation.  Callers that want a
derivative exact to order N must start from ``t_max >= N + 1``.
``integrate_dt`` keeps the truncation and drops whatever spills past it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Mapping, Tuple

from .exactnum import format_rational


class SeriesError(ValueError):
    """Invalid series operation (mismatched truncations, bad queries)."""


class FixpointError(SeriesError):
    """solve_fixpoint did not stabilize: the update map is not contracting."""


@dataclass(frozen=True, order=True)
class TruncationSpec:
    """Bounds kept by a truncated series.

    t_max: largest t-exponent stored.
    xdeg_max: largest total x-degree stored.
    var_max: largest variable index D; x_i with i > D are not tracked.
    """

    t_max: int
    xdeg_max: int
    var_max: int = 1

    def __post_init__(self) -> None:
        if self.t_max < 0 or self.xdeg_max < 0:
            raise SeriesError("truncation bounds must be nonnegative")
        if self.var_max < 1:
            raise SeriesError("var_max must be at least 1")

    def contains(self, other: "TruncationSpec") -> bool:
        """True when ``other`` keeps no monomial that self would drop."""
        return (
            other.t_max <= self.t_max
            and other.xdeg_max <= self.xdeg_max
            and other.var_max <= self.var_max
        )


@dataclass(frozen=True)
class Monomial:
    """t^a * prod x_i^{e_i}; x_exps holds (index, exponent) pairs, sorted,
    with no zero exponents."""

    t_exp: int = 0
    x_exps: Tuple[Tuple[int, int], ...] = ()

    @staticmethod
    def make(t_exp: int = 0, xs: Mapping[int, int] | None = None) -> "Monomial":
        pairs = []
        for i, e in sorted((xs or {}).items()):
            if e == 0:
                continue
            if i < 1 or e < 0:
                raise SeriesError(f"bad variable power x_{i}^{e}")
            pairs.append((i, e))
        if t_exp < 0:
            raise SeriesError("negative t exponent")
        return Monomial(t_exp, tuple(pairs))

    @property
    def xdeg(self) -> int:
        return sum(e for _, e in self.x_exps)

    def mul(self, other: "Monomial") -> "Monomial":
        xs: Dict[int, int] = dict(self.x_exps)
        for i, e in other.x_exps:
            xs[i] = xs.get(i, 0) + e
        return Monomial(self.t_exp + other.t_exp, tuple(sorted(xs.items())))

    def within(self, trunc: TruncationSpec) -> bool:
        if self.t_exp > trunc.t_max or self.xdeg > trunc.xdeg_max:
            return False
        return all(i <= trunc.var_max for i, _ in self.x_exps)

    def sort_key(self):
        return (self.t_exp, self.xdeg, self.x_exps)

    def label(self) -> str:
        parts = []
        if self.t_exp:
            parts.append(f"t^{self.t_exp}")
        for i, e in self.x_exps:
            parts.append(f"x{i}^{e}")
        return " ".join(parts) if parts else "1"


class Series:
    """Sparse truncated series: a map from monomials to nonzero Fractions."""

    __slots__ = ("trunc", "_terms")

    def __init__(self, trunc: TruncationSpec, terms: Mapping[Monomial, Fraction] | None = None):
        self.trunc = trunc
        clean: Dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            if c == 0:
                continue
            if not m.within(trunc):
                raise SeriesError(f"term {m.label()} violates truncation {trunc}")
            clean[m] = Fraction(c)
        self._terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(trunc: TruncationSpec) -> "Series":
        return Series(trunc)

    @staticmethod
    def one(trunc: TruncationSpec) -> "Series":
        return Series(trunc, {Monomial(): Fraction(1)})

    @staticmethod
    def t_power(trunc: TruncationSpec, k: int = 1) -> "Series":
        if k > trunc.t_max:
            return Series(trunc)
        return Series(trunc, {Monomial(k): Fraction(1)})

    @staticmethod
    def x_var(trunc: TruncationSpec, i: int) -> "Series":
        return Series(trunc, {Monomial.make(0, {i: 1}): Fraction(1)})

    # -- inspection --------------------------------------------------------

    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, m: Monomial) -> Fraction:
        if not m.within(self.trunc):
            raise SeriesError(
                f"coefficient query {m.label()} outside truncation {self.trunc}"
            )
        return self._terms.get(m, Fraction(0))

    def x_zero_part(self) -> "Series":
        """The part with no x factors (set every x_i to 0)."""
        kept = {m: c for m, c in self._terms.items() if not m.x_exps}
        return Series(self.trunc, kept)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self.trunc == other.trunc and self._terms == other._terms

    def __hash__(self):
        raise TypeError("Series is not hashable")

    def __repr__(self) -> str:
        inner = ", ".join(
            f"{m.label()}: {format_rational(c)}"
            for m, c in sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())
        )
        return f"Series({self.trunc}, {{{inner}}})"

    # -- ring operations ---------------------------------------------------

    def _require_same_trunc(self, other: "Series") -> None:
        if self.trunc != other.trunc:
            raise SeriesError(f"truncation mismatch: {self.trunc} vs {other.trunc}")

    def __add__(self, other: "Series") -> "Series":
        self._require_same_trunc(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, Fraction(0)) + c
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = s
        return Series(self.trunc, out)

    def __neg__(self) -> "Series":
        return Series(self.trunc, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "Series") -> "Series":
        return self + (-other)

    def scale(self, c) -> "Series":
        c = Fraction(c)
        if c == 0:
            return Series(self.trunc)
        return Series(self.trunc, {m: c * v for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._require_same_trunc(other)
        t_max, xdeg_max = self.trunc.t_max, self.trunc.xdeg_max
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                if m1.t_exp + m2.t_exp > t_max:
                    continue
                if m1.xdeg + m2.xdeg > xdeg_max:
                    continue
                m = m1.mul(m2)
                s = out.get(m, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(m, None)
                else:
                    out[m] = s
        return Series(self.trunc, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "Series":
        if n < 0:
            raise SeriesError("negative powers are not defined for truncated series")
        out = Series.one(self.trunc)
        for _ in range(n):
            out = out * self
        return out

    # -- calculus ----------------------------------------------------------

    def d_dt(self) -> "Series":
        """Termwise t-derivative.  The result's t_max drops by one."""
        new_trunc = TruncationSpec(
            max(self.trunc.t_max - 1, 0), self.trunc.xdeg_max, self.trunc.var_max
        )
        out: Dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            if m.t_exp == 0:
                continue
            if m.t_exp - 1 > new_trunc.t_max:
                continue
            out[Monomial(m.t_exp - 1, m.x_exps)] = c * m.t_exp
        return Series(new_trunc, out)

    def integrate_dt(self) -> "Series":
        """Termwise t-antiderivative with integration constant 0.

        Keeps the truncation; monomials pushed past t_max are dropped.
        """
        out: Dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            if m.t_exp + 1 > self.trunc.t_max:
                continue
            out[Monomial(m.t_exp + 1, m.x_exps)] = c / (m.t_exp + 1)
        return Series(self.trunc, out)

    # -- truncation management ---------------------------------------------

    def restrict(self, trunc: TruncationSpec) -> "Series":
        """Forget terms beyond a smaller truncation."""
        if not self.trunc.contains(trunc):
            raise SeriesError(f"{trunc} is not contained in {self.trunc}")
        kept = {m: c for m, c in self._terms.items() if m.within(trunc)}
        return Series(trunc, kept)

    # -- rendering ----------------------------------------------------------

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def render_text(self) -> str:
        """One term per line, "t^a x1^b : num/den", deterministically sorted."""
        if not self._terms:
            return "0"
        return "\n".join(
            f"{m.label()} : {format_rational(c)}" for m, c in self.sorted_terms()
        )

    def render_json_obj(self) -> list:
        out = []
        for m, c in self.sorted_terms():
            out.append(
                {
                    "t": m.t_exp,
                    "x": {str(i): e for i, e in m.x_exps},
                    "coeff": format_rational(c),
                }
            )
        return out


def common_restrict(a: Series, b: Series) -> Tuple[Series, Series]:
    """Restrict both series to the componentwise-minimal common truncation."""
    trunc = TruncationSpec(
        min(a.trunc.t_max, b.trunc.t_max),
        min(a.trunc.xdeg_max, b.trunc.xdeg_max),
        min(a.trunc.var_max, b.trunc.var_max),
    )
    return a.restrict(trunc), b.restrict(trunc)


def series_agree(a: Series, b: Series) -> bool:
    """Termwise equality on the common truncation of the two series."""
    ra, rb = common_restrict(a, b)
    return ra == rb


def solve_fixpoint(update: Callable[[Series], Series], trunc: TruncationSpec) -> Series:
    """Solve X = update(X) for updates contracting in the x-adic grading.

    The x-degree-k part of ``update(X)`` must depend only on parts of ``X``
    of x-degree < k (true whenever every non-constant summand of the update
    carries an x factor).  Iteration then fixes x-degree k at step k, so the
    sequence stabilizes after at most xdeg_max + 1 applications; one extra
    application certifies the fixed point and a failure to stabilize raises
    :class:`FixpointError`.
    """
    x = Series.zero(trunc)
    for _ in range(trunc.xdeg_max + 2):
        nxt = update(x)
        if nxt.trunc != trunc:
            raise SeriesError("update map changed the truncation")
        if nxt == x:
            return x
        x = nxt
    raise FixpointError(
        "no fixed point after xdeg_max + 2 iterations; update is not contracting"
    )
