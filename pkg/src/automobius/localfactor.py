"""Per-prime local data: Satake values, lambda_pi(p) and mu_pi(p^a).

The reciprocal local factor prod_j (1 - gamma_j X) is a polynomial of degree
d whose coefficient of X^a is mu_pi(p^a) = (-1)^a e_a(gamma).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AutomobiusError, DataError
from .hecke import satake_alpha
from .maass import check_sym_capability
from .repalg import RepExpr, Sym, exponents

IMAG_TOL = 1e-9


def elementary_symmetric(values):
    """[e_0, ..., e_d] of the given numbers, by incremental polynomial products."""
    coeffs = [complex(1.0)]
    for g in values:
        nxt = coeffs + [0j]
        for a in range(len(coeffs), 0, -1):
            nxt[a] += g * coeffs[a - 1]
        coeffs = nxt
    return coeffs


def elementary_symmetric_rows(gammas):
    """Row-wise e_a for a (P, d) array; returns (P, d+1)."""
    P, d = gammas.shape
    out = np.zeros((P, d + 1), dtype=complex)
    out[:, 0] = 1.0
    for j in range(d):
        g = gammas[:, j:j + 1]
        out[:, 1:j + 2] = out[:, 1:j + 2] + g * out[:, 0:j + 1]
    return out


@dataclass(frozen=True)
class LocalData:
    p: int
    degree: int
    lambda_p: float
    mobius: tuple
    satake_values: tuple


def _atoms(e):
    if isinstance(e, Sym):
        yield e
    elif hasattr(e, "left"):
        yield from _atoms(e.left)
        yield from _atoms(e.right)


def _satake_matrix(e: RepExpr, primes, registry):
    """(P, d) complex Satake values, one column per exponent vector."""
    primes = np.atleast_1d(np.asarray(primes, dtype=np.int64))
    for atom in _atoms(e):
        if registry.is_maass(atom.form):
            check_sym_capability(atom.m)
    ms = exponents(e)
    alphas = [satake_alpha(registry.lambdas(f, primes)) for f in ms.base_forms]
    cols = []
    for v, mult in ms.entries:
        val = np.ones(len(primes), dtype=complex)
        for a, k in zip(alphas, v):
            if k:
                val = val * a ** k
        cols.extend([val] * mult)
    return np.stack(cols, axis=1)


def _real(z, what):
    err = np.abs(z.imag) / np.maximum(1.0, np.abs(z.real))
    if err.size and err.max() > IMAG_TOL:
        raise AutomobiusError(f"{what} has imaginary part {err.max():.3e}; expression is not self-dual?")
    return np.ascontiguousarray(z.real)


def local_tables(e: RepExpr, primes, registry):
    """Vectorized local data: (lambda_p array (P,), mobius array (P, d+1))."""
    gam = _satake_matrix(e, primes, registry)
    es = elementary_symmetric_rows(gam)
    signs = (-1.0) ** np.arange(es.shape[1])
    mob = _real(es * signs, "mu(p^a)")
    lam = _real(gam.sum(axis=1), "lambda(p)")
    return lam, mob


def local_data(e: RepExpr, p: int, registry) -> LocalData:
    try:
        gam = _satake_matrix(e, [p], registry)[0]
    except DataError as exc:
        raise DataError(f"local data for {e} at p={p}: {exc.message}", p=p, **exc.location) from None
    es = np.array(elementary_symmetric(gam))
    mob = _real(es * (-1.0) ** np.arange(len(es)), "mu(p^a)")
    lam = _real(np.array([gam.sum()]), "lambda(p)")[0]
    return LocalData(p, len(gam), float(lam), tuple(mob.tolist()), tuple(gam.tolist()))
