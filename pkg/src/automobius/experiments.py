"""Mertens sums, inequality grids, decay exponents and the Maass 1/12 check."""
from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ArgumentError, DataError
from .hecke import sym_eigenvalue
from .localfactor import local_tables
from .primes import decades, primes_upto
from .repalg import EIGENFORMS, RepExpr, Sym, Tensor, Zeta, exponents
from .report import Report
from .sieve import abs_partial_sums, mobius_table

MOMENTS = ("abs", "square", "fourth", "unit")
MAASS_ETA = 1 / 12
DRIFT_BAND = 1.0  # default pass band for |D(x_max) - D(x_min)|
DECAY_BAND = 1.5  # log^eta-weighted density may grow at most this factor
HO_SLACK = 1e-9


def fingerprint(e: RepExpr):
    dsl = e.to_dsl()
    return f"{dsl}#{hashlib.sha256(dsl.encode()).hexdigest()[:12]}"


def _loglog(x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 2):
        raise ArgumentError("log log x needs x >= 2")
    return np.log(np.log(x))


# ------------------------------------------------------------ exponents

def tang_wu_coefficients(m: int):
    """(a0, a1, a2) with sqrt(t) <= a0 + a1 t + a2 t^2 on [0, 1]."""
    if int(m) != m or m < 1:
        raise ArgumentError(f"m must be a positive integer, got {m!r}")
    k = (m + 2) * (m + 1)
    s = math.sqrt(k)
    den = 2 * (k - 1) ** 2
    a0 = ((k - 3) * s + 2) / den
    a1 = ((k * k + 3) * s - 4 * k) / den
    a2 = -((k * k + k) * s - 2 * k * k) / den
    return a0, a1, a2


def eta_exponent(m1: int, m2: int) -> float:
    """Closed-form decay exponent for Sym^m1(f) x Sym^m2(g), d = (m1+1)(m2+1)."""
    if m1 < 0 or m2 < 0 or int(m1) != m1 or int(m2) != m2:
        raise ArgumentError("m1, m2 must be nonnegative integers")
    if m1 == 0 and m2 == 0:
        raise ArgumentError("m1 and m2 must not both be zero", m1=0, m2=0)
    d = (m1 + 1) * (m2 + 1)
    return (d - 1) * (d + 1) / ((d - 1) ** 2 + 3 * (d - 1) + 1) * ((d + 2) / (d + 1) - math.sqrt((d + 1) / d))


def eta_from_coefficients(d: int) -> float:
    """1 - (a0 d + a1/d + a2/d^2) with m = d - 1: the slopes 1, 1, d of the
    unit, square and fourth Mertens sums fed through the inequality at
    t = (lambda/d)^2."""
    a0, a1, a2 = tang_wu_coefficients(d - 1)
    return 1 - (a0 * d + a1 / d + a2 / d ** 2)


def _theorem_shape(e):
    """(m1, m2) if e is Sym^m1(f) x Sym^m2(g) with distinct holomorphic f, g."""
    if isinstance(e, Sym) and e.form in EIGENFORMS:
        return e.m, 0
    if isinstance(e, Tensor) and isinstance(e.left, Sym) and isinstance(e.right, Sym):
        a, b = e.left, e.right
        if a.form != b.form and a.form in EIGENFORMS and b.form in EIGENFORMS:
            return a.m, b.m
    return None


def predicted_eta(e: RepExpr, registry=None):
    if isinstance(e, Zeta):
        return 0.0
    if isinstance(e, Sym) and e.m == 1 and (e.form.startswith("maass:") or (registry and registry.is_maass(e.form))):
        return MAASS_ETA
    shape = _theorem_shape(e)
    if shape is None or shape == (0, 0):
        return 0.0 if shape == (0, 0) else None
    return eta_exponent(*shape)


def predicted_slope(e: RepExpr, moment, registry=None):
    """Slope c of Sum w(p)/p against log log x (an upper bound for abs)."""
    if moment == "unit":
        return 1.0
    if moment == "square":
        return float(exponents(Tensor(e, e)).trivial_multiplicity())
    if moment == "fourth":
        sq = Tensor(e, e)
        return float(exponents(Tensor(sq, sq)).trivial_multiplicity())
    eta = predicted_eta(e, registry)
    return None if eta is None else 1.0 - eta


# ------------------------------------------------------------ Mertens sums

@dataclass
class MertensReport:
    rep: str
    moment: str
    x_max: int
    checkpoints: list  # (x, sum, loglog x)
    c: float | None
    fitted_slope: float
    fit_range: tuple
    drift: list = field(default_factory=list)

    @property
    def drift_change(self):
        if self.c is None or len(self.drift) < 2:
            return None
        return self.drift[-1] - self.drift[0]

    def to_report(self):
        rows = [(x, s, ll, d) for (x, s, ll), d in zip(self.checkpoints, self.drift or [None] * len(self.checkpoints))]
        meta = {"rep": self.rep, "moment": self.moment, "x_max": self.x_max, "c": self.c,
                "fitted_slope": self.fitted_slope, "fit_range": list(self.fit_range),
                "drift_change": self.drift_change}
        return Report("mertens", ["x", "sum", "loglog_x", "drift"], rows, meta)


def _weights(lam, moment):
    if moment == "unit":
        return np.ones_like(lam)
    if moment == "abs":
        return np.abs(lam)
    if moment == "square":
        return lam * lam
    return (lam * lam) ** 2


def mertens_sum(e: RepExpr, moment, x_max, registry, checkpoints=None, fit_range=None,
                fit_points=200) -> MertensReport:
    """Sum_{p <= x} w(p)/p with w = |lambda|, lambda^2, lambda^4 or 1."""
    if moment not in MOMENTS:
        raise ArgumentError(f"moment must be one of {MOMENTS}, got {moment!r}")
    x_max = int(x_max)
    if x_max < 2:
        raise ArgumentError("x_max must be >= 2")
    primes = primes_upto(x_max)
    lam = np.ones(len(primes)) if moment == "unit" else local_tables(e, primes, registry)[0]
    cum = np.cumsum(_weights(lam, moment) / primes)

    def at(x):
        k = np.searchsorted(primes, np.asarray(x, dtype=np.int64), side="right")
        return np.where(k > 0, cum[np.maximum(k - 1, 0)], 0.0)

    xs = decades(x_max) if checkpoints is None else [int(x) for x in checkpoints]
    if any(x < 2 or x > x_max for x in xs) or any(b <= a for a, b in zip(xs, xs[1:])):
        raise ArgumentError(f"checkpoints must be increasing within [2, {x_max}]")
    sums = at(xs)
    ll = _loglog(xs)
    if fit_range is None:
        fit_range = (10 ** 4, x_max) if x_max >= 10 ** 5 else (max(2.0, math.sqrt(x_max)), x_max)
    lo, hi = fit_range
    if not 2 <= lo < hi <= x_max:
        raise ArgumentError(f"fit range must satisfy 2 <= lo < hi <= {x_max}")
    grid = np.unique(np.geomspace(lo, hi, fit_points).astype(np.int64))
    slope = float(np.polyfit(_loglog(grid), at(grid), 1)[0])
    c = predicted_slope(e, moment, registry)
    drift = [] if c is None else [float(s - c * l) for s, l in zip(sums, ll)]
    rows = [(x, float(s), float(l)) for x, s, l in zip(xs, sums, ll)]
    return MertensReport(fingerprint(e), moment, x_max, rows, c, slope, (lo, hi), drift)


# ------------------------------------------------------------ inequalities

@dataclass(frozen=True)
class InequalityGridReport:
    id: str
    lo: float
    hi: float
    steps: int
    min_margin: float  # min of RHS - LHS
    argmin: float
    coefficients: tuple

    @property
    def max_violation(self):
        return -self.min_margin

    def holds(self, slack=1e-12):
        return self.min_margin >= -slack

    def to_report(self):
        meta = {"coefficients": list(self.coefficients)}
        return Report("inequality_grid", ["id", "lo", "hi", "steps", "min_margin", "argmin"],
                      [(self.id, self.lo, self.hi, self.steps, self.min_margin, self.argmin)], meta)


HO_COEFFS = (Fraction(1), Fraction(1, 2), Fraction(-1, 9), Fraction(1, 36))  # in powers of (t - 1)
_LEMMA = re.compile(r"^lemma22\((\d+)\)$")


def ho_polynomial():
    """Coefficients of 1 + (t-1)/2 - (t-1)^2/9 + (t-1)^3/36 in powers of t."""
    out = [Fraction(0)] * len(HO_COEFFS)
    for j, c in enumerate(HO_COEFFS):
        for i in range(j + 1):
            out[i] += c * math.comb(j, i) * (-1) ** (j - i)
    return tuple(out)


def _rhs(ineq, m, t):
    if ineq == "ho":
        return sum(float(c) * t ** i for i, c in enumerate(ho_polynomial()))
    a0, a1, a2 = tang_wu_coefficients(m)
    return a0 + a1 * t + a2 * t * t


def inequality_margin(ineq: str, t, m=None):
    """RHS - LHS at t (scalar or array)."""
    t = np.asarray(t, dtype=float)
    return _rhs(ineq, m, t) - np.sqrt(t)


def inequality_grid(ineq: str, lo: float, hi: float, steps: int, m=None) -> InequalityGridReport:
    """RHS - LHS on np.linspace(lo, hi, steps); ineq is 'ho', 'lemma22' (with m) or 'lemma22(<m>)'."""
    match = _LEMMA.match(ineq)
    if match:
        ineq, m = "lemma22", int(match.group(1))
    if ineq not in ("ho", "lemma22"):
        raise ArgumentError(f"unknown inequality {ineq!r}")
    if steps < 2 or not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise ArgumentError("grid needs finite lo < hi and steps >= 2")
    if lo < 0:
        raise ArgumentError(f"{ineq} is stated for t >= 0, got lo={lo}")
    if ineq == "lemma22":
        if m is None:
            raise ArgumentError("lemma22 needs m")
        if hi > 1:
            raise ArgumentError(f"lemma22 is stated on [0, 1], got hi={hi}")
        coeffs = tang_wu_coefficients(m)
        name = f"lemma22({m})"
    else:
        coeffs = tuple(float(c) for c in ho_polynomial())
        name = "ho"
    t = np.linspace(lo, hi, steps)
    margin = inequality_margin(ineq, t, m)
    i = int(np.argmin(margin))
    return InequalityGridReport(name, float(lo), float(hi), int(steps), float(margin[i]), float(t[i]), coeffs)


# ------------------------------------------------------------ decay

@dataclass
class DecayReport:
    rep: str
    N: int
    eta: float | None
    rows: list  # (x, S(x)/x, log^eta x * S(x)/x)
    decreasing: bool
    bounded: bool | None
    band: float

    def to_report(self):
        meta = {"rep": self.rep, "N": self.N, "eta": self.eta, "decreasing": self.decreasing,
                "bounded": self.bounded, "band": self.band}
        return Report("decay", ["x", "density", "weighted_density"], self.rows, meta)


def decay_experiment(e: RepExpr, N, registry, checkpoints=None, band=DECAY_BAND, table=None, threads=1):
    """S(x)/x for S(x) = sum_{n <= x} |mu(n)|, and the same scaled by log^eta x.

    ``decreasing`` asks for strict decrease across checkpoints; ``bounded``
    asks that the scaled column never exceed ``band`` times its first value.
    """
    N = int(N)
    t = table if table is not None else mobius_table(e, N, registry, threads=threads)
    series = abs_partial_sums(t, checkpoints)
    eta = predicted_eta(e, registry)
    rows = []
    for x, s in series.checkpoints:
        dens = s / x
        w = None if eta is None else (dens * math.log(x) ** eta if x > 1 else dens)
        rows.append((x, dens, w))
    dens = [r[1] for r in rows]
    decreasing = all(b < a for a, b in zip(dens, dens[1:]))
    bounded = None
    if eta is not None:
        ws = [r[2] for r in rows]
        bounded = bool(max(ws) <= band * ws[0])
    return DecayReport(fingerprint(e), N, eta, rows, decreasing, bounded, band)


# ------------------------------------------------------------ Maass 1/12

def ho_surrogate(lam):
    """Pointwise upper bound for |lambda| from the Ho inequality at t = lambda^2."""
    t = np.asarray(lam, dtype=float) ** 2
    return sum(float(c) * t ** i for i, c in enumerate(ho_polynomial()))


def ho_component_weights():
    """Coefficients of the surrogate in the basis 1, lambda_Sym2, lambda_Sym4, lambda_Sym3^2.

    Uses lambda^2 = 1 + S2, lambda^4 = 2 + 3 S2 + S4 and
    lambda^6 = 5 + 8 S2 + 4 S4 + S2 S4 with S2 S4 = S3^2 - 1.
    """
    c0, c2, c4, c6 = ho_polynomial()
    basis = {  # power of lambda -> (1, S2, S4, S3^2)
        0: (1, 0, 0, 0),
        2: (1, 1, 0, 0),
        4: (2, 3, 1, 0),
        6: (4, 8, 4, 1),
    }
    out = [Fraction(0)] * 4
    for c, k in zip((c0, c2, c4, c6), (0, 2, 4, 6)):
        for i, b in enumerate(basis[k]):
            out[i] += c * b
    return tuple(out)


def ho_main_slope():
    """Mertens slope of the surrogate: Sym^2, Sym^4 sums are O(1), Sym^3^2 is at most 1."""
    w = ho_component_weights()
    return w[0] + w[3]


@dataclass
class MaassBoundReport:
    dataset: str
    x_max: int
    rows: list
    columns: list
    pointwise_max_excess: float  # max over data primes of |lambda| - surrogate
    pointwise_ok: bool
    provenance: dict

    def to_report(self):
        meta = {"dataset": self.dataset, "x_max": self.x_max, "pointwise_max_excess": self.pointwise_max_excess,
                "pointwise_ok": self.pointwise_ok, "slope": str(ho_main_slope()),
                "component_weights": [str(w) for w in ho_component_weights()], "provenance": self.provenance}
        return Report("maass_check", self.columns, self.rows, meta)


MAASS_COLUMNS = ["x", "L", "bound", "margin", "surrogate", "sum_one", "sum_S2", "sum_S4", "sum_S3sq",
                 "aggregate"]


def maass_abs_bound_check(d, x_max, checkpoints=None) -> MaassBoundReport:
    """L(x) = sum_{p <= x} |lambda(p)|/p against (11/12) log log x."""
    x_max = int(x_max)
    if x_max < 1:
        raise ArgumentError("x_max must be >= 1")
    eig = d.eigenvalues()
    keep = eig.primes <= x_max
    primes, lam = eig.primes[keep], eig.values[keep]
    expected = primes_upto(x_max)
    if len(primes) != len(expected) or np.any(primes != expected):
        missing = int(np.setdiff1d(expected, primes)[0])
        raise DataError(f"dataset {d.id} has no lambda({missing})", p=missing)
    surrogate = ho_surrogate(lam)
    excess = float(np.max(np.abs(lam) - surrogate)) if len(lam) else -math.inf
    s2, s3, s4 = (sym_eigenvalue(lam, j) for j in (2, 3, 4))
    cols = [np.abs(lam), surrogate, np.ones_like(lam), s2, s4, s3 * s3]
    cums = [np.cumsum(c / primes) for c in cols]
    w = [float(x) for x in ho_component_weights()]
    slope = float(ho_main_slope())
    xs = decades(x_max) if checkpoints is None else [int(x) for x in checkpoints]
    rows = []
    for x in xs:
        k = int(np.searchsorted(primes, x, side="right"))
        vals = [float(c[k - 1]) if k else 0.0 for c in cums]
        L, sur, one, S2, S4, S3sq = vals
        bound = slope * float(_loglog(x)) if x >= 2 else math.nan
        agg = w[0] * one + w[1] * S2 + w[2] * S4 + w[3] * S3sq
        rows.append((x, L, bound, bound - L, sur, one, S2, S4, S3sq, agg))
    return MaassBoundReport(d.id, x_max, rows, MAASS_COLUMNS, excess, excess <= HO_SLACK, d.provenance())
