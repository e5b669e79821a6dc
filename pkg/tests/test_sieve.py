import math
import random

import numpy as np
import pytest

from automobius.errors import ArgumentError, DataError
from automobius.localfactor import local_data
from automobius.primes import factorize, primes_upto
from automobius.repalg import Sym, Zeta, parse_rep
from automobius.sieve import (
    AdditiveCharacter,
    ConstantXi,
    PartialSumSeries,
    abs_partial_sums,
    correlate,
    mobius_from_factorization,
    mobius_table,
    parse_xi,
    signed_partial_sums,
)


def classical_mobius(n):
    """Trial division."""
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    return -out if m > 1 else out


def test_zeta_first_values(registry):
    t = mobius_table(Zeta(), 10, registry)
    assert t.values.tolist() == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_zeta_matches_trial_division(registry):
    t = mobius_table(Zeta(), 5000, registry, segment=777)
    assert t.values.tolist() == [classical_mobius(n) for n in range(1, 5001)]


def test_sym1_small_table(registry):
    t = mobius_table(Sym(1, "f12"), 4, registry)
    l2, l3 = local_data(Sym(1, "f12"), 2, registry).lambda_p, local_data(Sym(1, "f12"), 3, registry).lambda_p
    assert t[1] == 1 and t[2] == pytest.approx(-l2) and t[3] == pytest.approx(-l3) and t[4] == pytest.approx(1)


def test_segments_and_threads_do_not_change_values(registry):
    e = parse_rep("sym1(f12) x sym1(f16)")
    base = mobius_table(e, 30000, registry)
    for seg, threads in ((1000, 1), (4096, 3), (29999, 2)):
        other = mobius_table(e, 30000, registry, segment=seg, threads=threads)
        assert np.array_equal(base.values, other.values)


@pytest.fixture(scope="module")
def pi_table(registry):
    return mobius_table(parse_rep("sym1(f12) x sym1(f16)"), 10 ** 5, registry)


def test_support_is_fifth_power_free(pi_table):
    d = pi_table.degree
    assert d == 4
    for p in primes_upto(20).tolist():
        q = p ** (d + 1)
        if q <= pi_table.N:
            assert np.all(pi_table.values[q - 1::q] == 0.0)


def test_multiplicativity_spot_check(pi_table):
    rng = random.Random(1)
    N, checked = pi_table.N, 0
    while checked < 1000:
        m = rng.randint(1, 400)
        n = rng.randint(1, N // m)
        if math.gcd(m, n) != 1:
            continue
        a, b = pi_table[m], pi_table[n]
        assert abs(pi_table[m * n] - a * b) <= 1e-6 * (1 + abs(a * b))
        checked += 1


def test_agreement_with_factorization(pi_table, registry):
    rng = random.Random(2)
    e = parse_rep("sym1(f12) x sym1(f16)")
    for n in rng.sample(range(1, pi_table.N + 1), 1000):
        assert abs(pi_table[n] - mobius_from_factorization(e, n, registry)) <= 1e-9


def test_factorize_roundtrip():
    for n in (1, 2, 360, 9973, 2 ** 10 * 3 ** 4 * 97):
        assert math.prod(p ** a for p, a in factorize(n).items()) == n


def test_partial_sums(registry):
    t = mobius_table(Zeta(), 10, registry)
    assert abs_partial_sums(t, [1, 10]).as_dict() == {1: 1.0, 10: 7.0}
    assert signed_partial_sums(t, [10]).as_dict() == {10: -1.0}
    one = mobius_table(parse_rep("sym2(f22)"), 1, registry)
    assert abs_partial_sums(one).checkpoints == ((1, 1.0),)
    with pytest.raises(ArgumentError):
        abs_partial_sums(t, [11])
    with pytest.raises(ArgumentError):
        PartialSumSeries("x", ((5, 1.0), (5, 2.0)))


def test_partial_sums_nondecreasing(pi_table):
    sums = [v for _, v in abs_partial_sums(pi_table, list(range(1000, 100001, 1000))).checkpoints]
    assert all(b >= a for a, b in zip(sums, sums[1:]))


def test_bad_N(registry):
    with pytest.raises(ArgumentError):
        mobius_table(Zeta(), 0, registry)


def test_table_save(tmp_path, registry):
    t = mobius_table(Sym(1, "f12"), 30, registry)
    path = tmp_path / "mu.csv"
    t.save(path)
    data = np.loadtxt(path, delimiter=",")
    assert np.array_equal(data[:, 1], t.values)


# -- correlations

def test_xi_parsing():
    assert isinstance(parse_xi("1"), ConstantXi)
    assert parse_xi("e(0.25)") == AdditiveCharacter(0.25)
    assert parse_xi("file:/tmp/x").path == "/tmp/x"
    with pytest.raises(ArgumentError):
        parse_xi("cos(n)")


def test_correlate_against_direct_sum(registry):
    N = 3000
    t = mobius_table(Zeta(), N, registry)
    mu = [classical_mobius(n) for n in range(1, N + 1)]
    got = correlate(t, "e(0.3)", checkpoints=[100, N]).as_dict()
    for x in (100, N):
        direct = abs(sum(mu[n - 1] * complex(math.cos(2 * math.pi * 0.3 * n), math.sin(2 * math.pi * 0.3 * n))
                         for n in range(1, x + 1))) / x
        assert got[x] == pytest.approx(direct, abs=1e-12)


def test_correlate_constant_cases(registry, tmp_path):
    t = mobius_table(Zeta(), 2000, registry)
    assert correlate(t, "e(0)").checkpoints == correlate(t, "1").checkpoints
    zeros = tmp_path / "zeros.txt"
    zeros.write_text("0\n" * 2000)
    assert all(v == 0.0 for _, v in correlate(t, f"file:{zeros}").checkpoints)


def test_classical_mertens_decay(registry):
    t = mobius_table(Zeta(), 10 ** 6, registry)
    assert correlate(t, "1").checkpoints[-1][1] < 1e-3


def test_xi_file_errors(registry, tmp_path):
    t = mobius_table(Zeta(), 10, registry)
    short = tmp_path / "short.txt"
    short.write_text("1\n2\n")
    with pytest.raises(DataError) as err:
        correlate(t, f"file:{short}")
    assert err.value.location["line"] == 3
    bad = tmp_path / "bad.txt"
    bad.write_text("1\n" * 4 + "x\n" + "1\n" * 5)
    with pytest.raises(DataError) as err:
        correlate(t, f"file:{bad}")
    assert err.value.location["line"] == 5
    inf = tmp_path / "inf.txt"
    inf.write_text("1\n" * 9 + "inf\n")
    with pytest.raises(DataError):
        correlate(t, f"file:{inf}")
    with pytest.raises(DataError):
        correlate(t, f"file:{tmp_path / 'missing.txt'}")
