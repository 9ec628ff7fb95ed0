"""Residue decomposition, CRT reconstruction, limb disturbance algebra."""

import numpy as np
import pytest
import sympy

from faultlab.errors import ParameterError, StateError
from faultlab.ring import Domain, PrimeModulus, RingPoly, centered
from faultlab.rns import (LimbChain, RnsPoly, build_chain, crt_reconstruct,
                          decompose, predict_rns_error)


def small_chain():
    # 17 and 13 are both 1 mod 4, so degree 2 admits them.
    return LimbChain.create([PrimeModulus.create(17, 2), PrimeModulus.create(13, 2)])


def test_chain_constants():
    ch = small_chain()
    assert ch.q == 221
    assert ch.crt_qk == (13, 17)
    assert ch.crt_qk[0] * ch.crt_inv[0] % 17 == 1
    assert ch.crt_qk[1] * ch.crt_inv[1] % 13 == 1


def test_chain_rejects_duplicates():
    m = PrimeModulus.create(17, 2)
    with pytest.raises(ParameterError):
        LimbChain.create([m, m])


def test_chain_rejects_degree_mix():
    a = PrimeModulus.create(17, 2)
    b = PrimeModulus.create(17, 4)
    with pytest.raises(ParameterError):
        LimbChain.create([a, b])


def test_build_chain_descends_from_largest():
    ch = build_chain(5, 2, 2)
    assert tuple(m.q for m in ch.moduli) == (29, 17)
    ch = build_chain(60, 3, 1024)
    qs = [m.q for m in ch.moduli]
    assert qs[0] > qs[1] > qs[2]
    for q in qs:
        assert q.bit_length() == 60
        assert q % 2048 == 1
        assert sympy.isprime(q)


def test_build_chain_exhausts_gracefully():
    # Only finitely many 5-bit primes are 1 mod 4.
    with pytest.raises(ParameterError):
        build_chain(5, 5, 2)


def test_roundtrip_exhaustive_small():
    ch = small_chain()
    for x in range(221):
        res = decompose([x, 220 - x], ch)
        assert res[0] == (x % 17, (220 - x) % 17)
        assert res[1] == (x % 13, (220 - x) % 13)
        back = crt_reconstruct(res, ch)
        assert back == (x, 220 - x)


def test_roundtrip_random_large():
    ch = build_chain(60, 3, 4)
    rng = np.random.default_rng(17)
    vals = [int(rng.integers(0, 1 << 62)) * int(rng.integers(0, 1 << 62)) % ch.q
            for _ in range(4)]
    assert crt_reconstruct(decompose(vals, ch), ch) == tuple(vals)


def test_predict_rns_error_small_value():
    ch = small_chain()
    assert predict_rns_error(ch, 0, 1) == 52


def test_predict_rns_error_exhaustive_small():
    # Direct check: perturb one residue of a known value, reconstruct,
    # and compare the centered difference with the closed form.
    ch = small_chain()
    for x in (0, 1, 60, 123, 220):
        res = decompose([x, 0], ch)
        for k, p in enumerate((17, 13)):
            for e in range(p):
                bumped = [list(v) for v in res]
                bumped[k][0] = (bumped[k][0] + e) % p
                y = crt_reconstruct([tuple(v) for v in bumped], ch)[0]
                got = predict_rns_error(ch, k, e)
                assert (y - x) % ch.q == got % ch.q
                assert got == centered((y - x) % ch.q, ch.q)


def test_predict_rns_error_magnitude_floor():
    # Any nonzero single-limb disturbance moves the value by at least
    # the product of the other primes.
    ch = build_chain(60, 2, 4)
    floor = min(ch.crt_qk)
    rng = np.random.default_rng(23)
    for _ in range(50):
        k = int(rng.integers(0, 2))
        e = int(rng.integers(1, ch.moduli[k].q))
        assert abs(predict_rns_error(ch, k, e)) >= floor


def test_predict_rns_error_validation():
    ch = small_chain()
    with pytest.raises(ParameterError):
        predict_rns_error(ch, 2, 1)


def test_rns_poly_roundtrip():
    ch = build_chain(20, 2, 8)
    rng = np.random.default_rng(31)
    vals = [int(rng.integers(-(1 << 30), 1 << 30)) for _ in range(8)]
    p = RnsPoly.from_signed(vals, ch)
    assert p.reconstruct() == tuple(v % ch.q for v in vals)


def test_rns_poly_mul_matches_bigint():
    ch = build_chain(20, 2, 8)
    q, n = ch.q, 8
    rng = np.random.default_rng(37)
    av = [int(rng.integers(0, q)) for _ in range(n)]
    bv = [int(rng.integers(0, q)) for _ in range(n)]
    got = (RnsPoly.from_signed(av, ch) * RnsPoly.from_signed(bv, ch)).reconstruct()
    t = [0] * (2 * n)
    for i in range(n):
        for j in range(n):
            t[i + j] += av[i] * bv[j]
    want = tuple((t[k] - t[k + n]) % q for k in range(n))
    assert got == want


def test_rns_poly_add_neg():
    ch = build_chain(20, 2, 8)
    rng = np.random.default_rng(41)
    av = [int(rng.integers(0, ch.q)) for _ in range(8)]
    bv = [int(rng.integers(0, ch.q)) for _ in range(8)]
    a = RnsPoly.from_signed(av, ch)
    b = RnsPoly.from_signed(bv, ch)
    assert (a + b).reconstruct() == tuple((x + y) % ch.q for x, y in zip(av, bv))
    assert (a - b).reconstruct() == tuple((x - y) % ch.q for x, y in zip(av, bv))
    assert (a + (-a)).reconstruct() == (0,) * 8


def test_rns_poly_rejects_domain_mix():
    ch = build_chain(20, 2, 8)
    limbs = [RingPoly((0,) * 8, ch.moduli[0], Domain.COEFF),
             RingPoly((0,) * 8, ch.moduli[1], Domain.EVAL)]
    with pytest.raises(StateError):
        RnsPoly(tuple(limbs), ch)


def test_rns_poly_reconstruct_requires_coeff_domain():
    ch = build_chain(20, 2, 8)
    limbs = tuple(RingPoly((1,) * 8, m, Domain.EVAL) for m in ch.moduli)
    p = RnsPoly(limbs, ch)
    with pytest.raises(StateError):
        p.reconstruct()
