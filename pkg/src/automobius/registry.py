"""Session store of normalized eigenvalues for every form a rep may reference."""
from __future__ import annotations

import logging
import os
from pathlib import Path

import numpy as np

from .errors import DataError
from .hecke import NormalizedEigenvalues, normalize, sym_eigenvalue
from .maass import check_sym_capability
from .primes import primes_upto
from .qseries import EIGENFORMS, SeriesFactory, load_series, save_series

log = logging.getLogger(__name__)

CACHE_ENV = "AUTOMOBIUS_CACHE"


def default_cache_dir():
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "automobius"


class FormRegistry:
    """Holomorphic eigenforms are computed on demand; Maass datasets are added.

    With a cache directory, exact q-expansions are stored as
    ``<id>_N<N>.txt.gz`` and normalized eigenvalues as ``<id>_N<N>.npz``.
    """

    def __init__(self, cache_dir=None, use_cache=True):
        self.cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
        self.use_cache = use_cache
        self._eig = {}
        self._factory = None
        self.maass = {}

    # -- form ids
    def known_forms(self):
        return tuple(EIGENFORMS) + tuple(self.maass)

    def is_maass(self, form):
        return form in self.maass

    def add_maass(self, dataset):
        self.maass[dataset.id] = dataset
        eig = dataset.eigenvalues()
        self._eig[dataset.id] = (eig.bound, eig)
        return dataset.id

    # -- eigenvalues
    def _cache_path(self, form, N, suffix):
        return self.cache_dir / f"{form}_N{N}{suffix}"

    def _find_cached(self, form, N):
        if not (self.use_cache and self.cache_dir.is_dir()):
            return None
        best = None
        for path in self.cache_dir.glob(f"{form}_N*.npz"):
            try:
                n = int(path.name[len(form) + 2:-4])
            except ValueError:
                continue
            if n >= N and (best is None or n < best[0]):
                best = (n, path)
        return best

    def _compute_holomorphic(self, form, N):
        spec = EIGENFORMS[form]
        series = None
        src = self._cache_path(form, N, ".txt.gz")
        if self.use_cache and src.exists():
            series = load_series(src)
        if series is None:
            if self._factory is None or self._factory.N != N:
                self._factory = SeriesFactory(N)
            series = self._factory.form(spec)
            if self.use_cache:
                self.cache_dir.mkdir(parents=True, exist_ok=True)
                save_series(series, src, form)
        primes = primes_upto(N)
        vals = np.array([normalize(series[p], p, spec.weight) for p in primes.tolist()])
        if self.use_cache:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
            tmp = self._cache_path(form, N, f".tmp{os.getpid()}.npz")
            np.savez(tmp, primes=primes, values=vals)
            os.replace(tmp, self._cache_path(form, N, ".npz"))
        return NormalizedEigenvalues(form, primes, vals)

    def eigenvalues(self, form, N) -> NormalizedEigenvalues:
        """lambda(p) for primes p <= N (Maass data: as far as the file goes)."""
        if form in self._eig:
            limit, eig = self._eig[form]
            if limit >= N or self.is_maass(form):
                return _truncate(eig, N)
        if form not in EIGENFORMS:
            raise DataError(f"no eigenvalue data for form {form!r}", form=form)
        cached = self._find_cached(form, N)
        if cached is not None:
            with np.load(cached[1]) as z:
                eig = NormalizedEigenvalues(form, z["primes"], z["values"])
            limit = cached[0]
        else:
            log.info("computing q-expansion of %s to N=%d", form, N)
            eig, limit = self._compute_holomorphic(form, N), N
        self._eig[form] = (limit, eig)
        return _truncate(eig, N)

    def lambdas(self, form, primes):
        """lambda_form(p) at the given sorted primes; DataError on gaps."""
        primes = np.asarray(primes, dtype=np.int64)
        if len(primes) == 0:
            return np.zeros(0)
        eig = self.eigenvalues(form, int(primes[-1]))
        try:
            return eig.restrict(primes)
        except KeyError as exc:
            raise DataError(f"missing eigenvalue for form {form} at p={exc.args[0]}", form=form, p=exc.args[0]) from None

    def sym_lambdas(self, m, form, primes):
        if self.is_maass(form):
            check_sym_capability(m)
        return sym_eigenvalue(self.lambdas(form, primes), m)


def _truncate(eig, N):
    k = int(np.searchsorted(eig.primes, N, side="right"))
    if k == len(eig.primes):
        return eig
    return NormalizedEigenvalues(eig.form, eig.primes[:k], eig.values[:k], eig.source_precision)
