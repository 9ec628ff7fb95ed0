"""Residue number system decomposition over a chain of NTT primes.

A value x mod Q is held as its residues mod each limb prime q_k. The
chain precomputes the usual explicit-CRT constants Q_k = Q/q_k and
inv_k = Q_k^-1 mod q_k, which also give a closed form for how a
disturbance in one limb shows up after reconstruction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError, StateError
from .ring import Domain, PrimeModulus, RingPoly, centered, find_ntt_prime, is_prime_u64


@dataclass(frozen=True)
class LimbChain:
    """An ordered tuple of distinct NTT primes and their CRT constants."""

    moduli: tuple[PrimeModulus, ...]
    q: int
    crt_qk: tuple[int, ...]
    crt_inv: tuple[int, ...]

    @classmethod
    def create(cls, moduli) -> "LimbChain":
        moduli = tuple(moduli)
        if not moduli:
            raise ParameterError("a chain needs at least one limb")
        n = moduli[0].n
        primes = [m.q for m in moduli]
        if len(set(primes)) != len(primes):
            raise ParameterError("limb primes must be distinct")
        for m in moduli:
            if m.n != n:
                raise ParameterError("all limbs must share the ring degree")
        q = 1
        for p in primes:
            q *= p
        crt_qk = tuple(q // p for p in primes)
        crt_inv = tuple(pow(qk, -1, p) for qk, p in zip(crt_qk, primes))
        return cls(moduli=moduli, q=q, crt_qk=crt_qk, crt_inv=crt_inv)

    @property
    def num_limbs(self) -> int:
        return len(self.moduli)

    @property
    def n(self) -> int:
        return self.moduli[0].n


def build_chain(q0_bits: int, num_limbs: int, n: int) -> LimbChain:
    """Chain of num_limbs distinct primes of q0_bits bits, all = 1 mod 2n.

    Primes are taken in decreasing order starting from the largest
    qualifying one, so the chain for given parameters is unique.
    """
    if num_limbs < 1:
        raise ParameterError(f"num_limbs {num_limbs} must be >= 1")
    primes = [find_ntt_prime(q0_bits, n)]
    step = 2 * n
    while len(primes) < num_limbs:
        p = primes[-1] - step
        while p.bit_length() == q0_bits and not is_prime_u64(p):
            p -= step
        if p.bit_length() != q0_bits:
            raise ParameterError(
                f"fewer than {num_limbs} primes of {q0_bits} bits mod {step}")
        primes.append(p)
    return LimbChain.create([PrimeModulus.create(p, n) for p in primes])


def decompose(coeffs, chain: LimbChain) -> list[tuple[int, ...]]:
    """Residues of each coefficient mod every limb prime."""
    out = []
    for m in chain.moduli:
        q = m.q
        out.append(tuple(int(c) % q for c in coeffs))
    return out


def crt_reconstruct(residues, chain: LimbChain) -> tuple[int, ...]:
    """Recombine per-limb residue vectors into values in [0, Q)."""
    if len(residues) != chain.num_limbs:
        raise ParameterError("one residue vector per limb is required")
    n = chain.n
    q = chain.q
    out = [0] * n
    for k, m in enumerate(chain.moduli):
        qk = chain.crt_qk[k]
        inv = chain.crt_inv[k]
        p = m.q
        vec = residues[k]
        if len(vec) != n:
            raise ParameterError(f"limb {k} has {len(vec)} residues, expected {n}")
        for i in range(n):
            out[i] += (int(vec[i]) * inv % p) * qk
    return tuple(v % q for v in out)


def predict_rns_error(chain: LimbChain, limb_index: int, residue_delta: int) -> int:
    """Centered change in the reconstructed value when one limb moves.

    Adding residue_delta to limb k (mod q_k) shifts the CRT output by
    residue_delta * Q_k * inv_k mod Q. The smallest nonzero shift has
    magnitude Q_k, the product of all the other primes, which is why a
    single-limb disturbance is never small once there is more than one
    limb.
    """
    if not 0 <= limb_index < chain.num_limbs:
        raise ParameterError(f"limb index {limb_index} out of range")
    p = chain.moduli[limb_index].q
    e = residue_delta % p
    shift = e * chain.crt_qk[limb_index] % chain.q * chain.crt_inv[limb_index] % chain.q
    return centered(shift, chain.q)


@dataclass(frozen=True)
class RnsPoly:
    """Ring element stored limb-wise; every limb shares one domain."""

    limbs: tuple[RingPoly, ...]
    chain: LimbChain

    def __post_init__(self):
        limbs = tuple(self.limbs)
        if len(limbs) != self.chain.num_limbs:
            raise ParameterError("wrong number of limb polynomials")
        for lp, m in zip(limbs, self.chain.moduli):
            if lp.modulus != m:
                raise ParameterError("limb polynomial modulus mismatch")
        doms = {lp.domain for lp in limbs}
        if len(doms) > 1:
            raise StateError("limbs disagree on domain")
        object.__setattr__(self, "limbs", limbs)

    @classmethod
    def from_signed(cls, coeffs, chain: LimbChain,
                    domain: Domain = Domain.COEFF) -> "RnsPoly":
        """Decompose signed big coefficients into limb polynomials."""
        residues = decompose(coeffs, chain)
        limbs = [RingPoly(res, m, domain)
                 for res, m in zip(residues, chain.moduli)]
        return cls(tuple(limbs), chain)

    @property
    def domain(self) -> Domain:
        return self.limbs[0].domain

    def _check(self, other: "RnsPoly"):
        if self.chain != other.chain:
            raise StateError("operands live over different chains")

    def __add__(self, other: "RnsPoly") -> "RnsPoly":
        self._check(other)
        return RnsPoly(tuple(a + b for a, b in zip(self.limbs, other.limbs)),
                       self.chain)

    def __sub__(self, other: "RnsPoly") -> "RnsPoly":
        self._check(other)
        return RnsPoly(tuple(a - b for a, b in zip(self.limbs, other.limbs)),
                       self.chain)

    def __neg__(self) -> "RnsPoly":
        return RnsPoly(tuple(-a for a in self.limbs), self.chain)

    def __mul__(self, other: "RnsPoly") -> "RnsPoly":
        self._check(other)
        return RnsPoly(tuple(a * b for a, b in zip(self.limbs, other.limbs)),
                       self.chain)

    def reconstruct(self) -> tuple[int, ...]:
        """CRT-recombine the limbs; requires coefficient domain."""
        if self.domain is not Domain.COEFF:
            raise StateError("reconstruction needs coefficient domain")
        return crt_reconstruct([lp.coeffs for lp in self.limbs], self.chain)

    def __repr__(self):
        return (f"RnsPoly(n={self.chain.n}, limbs={self.chain.num_limbs}, "
                f"domain={self.domain.value})")
