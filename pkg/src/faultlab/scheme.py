"""Approximate-arithmetic encryption pipeline in four storage modes.

The four modes compute the same ciphertexts over the same modulus and
differ only in how ring elements are stored and multiplied:

  vanilla   one big-integer coefficient vector mod Q
  rns_only  residue vectors mod each limb prime, coefficient basis
  ntt_only  single word prime, evaluation basis
  rns_ntt   residue vectors per limb, evaluation basis

Because every representation is exact, a fixed seed gives bit-identical
decrypted coefficients in all modes that share (q0_bits, num_limbs),
which is what makes fault sensitivities comparable across modes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ParameterError
from .ring import BigPoly, CompositeModulus, Domain, RingPoly, centered
from .rns import LimbChain, RnsPoly, build_chain, crt_reconstruct
from .seeding import (derive_rng, sample_gaussian_ints, sample_ternary,
                      sample_ternary_sparse, sample_uniform_bigints,
                      sample_uniform_residues)
from .transforms import EncodingContext, NttTables, predict_l2_norm, to_coeff, to_eval


class Mode(Enum):
    """Storage and arithmetic strategy for ring elements."""

    VANILLA = "vanilla"
    RNS_ONLY = "rns_only"
    NTT_ONLY = "ntt_only"
    RNS_NTT = "rns_ntt"

    @property
    def uses_rns(self) -> bool:
        return self in (Mode.RNS_ONLY, Mode.RNS_NTT)

    @property
    def uses_ntt(self) -> bool:
        return self in (Mode.NTT_ONLY, Mode.RNS_NTT)


class SchemeParams:
    """Validated parameter set plus the precomputed machinery it implies.

    q0_bits is the bit size of every limb prime; num_limbs of them are
    chained, so the full modulus Q has roughly q0_bits * num_limbs bits.
    vanilla mode folds the chain into one big modulus, ntt_only is
    restricted to a single limb.
    """

    def __init__(self, mode, n: int, q0_bits: int, num_limbs: int = 1,
                 delta_log2: int = 40, slots: int | None = None,
                 hamming_weight: int = 0, sigma: float = 3.2):
        try:
            self.mode = Mode(mode)
        except ValueError:
            names = ", ".join(m.value for m in Mode)
            raise ParameterError(f"unknown mode {mode!r}; expected one of {names}") from None
        self.n = int(n)
        self.q0_bits = int(q0_bits)
        self.num_limbs = int(num_limbs)
        self.delta_log2 = int(delta_log2)
        self.slots = self.n // 2 if slots is None else int(slots)
        self.hamming_weight = int(hamming_weight)
        self.sigma = float(sigma)

        if self.mode is Mode.NTT_ONLY and self.num_limbs != 1:
            raise ParameterError("ntt_only stores a single word prime; num_limbs must be 1")
        if self.delta_log2 < 1:
            raise ParameterError("delta_log2 must be >= 1")
        if not 0 <= self.hamming_weight <= self.n:
            raise ParameterError("hamming_weight out of range")
        if self.sigma <= 0:
            raise ParameterError("sigma must be positive")

        self.chain = build_chain(self.q0_bits, self.num_limbs, self.n)
        self.delta = 1 << self.delta_log2
        if self.delta >= self.chain.q:
            raise ParameterError("delta must be smaller than the modulus")
        self.enc_ctx = EncodingContext.create(self.n, self.slots)
        self.big_modulus = None
        self.tables = None
        if self.mode is Mode.VANILLA:
            self.big_modulus = CompositeModulus.from_factors(
                [m.q for m in self.chain.moduli], self.n)
        if self.mode.uses_ntt:
            self.tables = tuple(NttTables.create(m) for m in self.chain.moduli)

    @property
    def modulus_value(self) -> int:
        """The full modulus Q as an integer."""
        return self.chain.q

    @property
    def word_bits(self) -> int:
        """Bit positions addressable by a fault in one stored word.

        Word-backed modes expose the whole 64-bit storage word; vanilla
        big integers have no fixed word, so the modulus width is used.
        """
        if self.mode is Mode.VANILLA:
            return self.chain.q.bit_length()
        return 64

    def limb_modulus(self, limb: int) -> int:
        """Value range of the stored word addressed by limb index."""
        if self.mode is Mode.VANILLA:
            return self.chain.q
        return self.chain.moduli[limb].q

    def predict_l2_norm(self, coeff_index: int, bit_index: int) -> float:
        """Slot-space l2 prediction for a plaintext coefficient bit flip."""
        return predict_l2_norm(self.n, self.slots, self.delta,
                               self.modulus_value, coeff_index, bit_index)

    def describe(self) -> dict:
        return {
            "mode": self.mode.value,
            "N": self.n,
            "q0_bits": self.q0_bits,
            "L": self.num_limbs,
            "delta_log2": self.delta_log2,
            "slots": self.slots,
        }

    def __repr__(self):
        d = self.describe()
        inner = ", ".join(f"{k}={v}" for k, v in d.items())
        return f"SchemeParams({inner})"


@dataclass(frozen=True)
class SecretKey:
    ternary: tuple[int, ...]
    poly: object


@dataclass(frozen=True)
class PublicKey:
    b: object
    a: object


@dataclass(frozen=True)
class Plaintext:
    poly: object


@dataclass(frozen=True)
class Ciphertext:
    c0: object
    c1: object


def rep_from_signed(params: SchemeParams, coeffs):
    """Lift signed integer coefficients into the mode's stored form."""
    mode = params.mode
    if mode is Mode.VANILLA:
        return BigPoly.from_signed(coeffs, params.big_modulus)
    if mode is Mode.RNS_ONLY:
        return RnsPoly.from_signed(coeffs, params.chain)
    if mode is Mode.NTT_ONLY:
        p = RingPoly.from_signed(coeffs, params.chain.moduli[0])
        return to_eval(p, params.tables[0])
    limbs = []
    for m, tab in zip(params.chain.moduli, params.tables):
        limbs.append(to_eval(RingPoly.from_signed(coeffs, m), tab))
    return RnsPoly(tuple(limbs), params.chain)


def rep_to_centered(params: SchemeParams, poly) -> tuple[int, ...]:
    """Centered coefficients mod Q of a stored ring element."""
    mode = params.mode
    if mode is Mode.VANILLA:
        return poly.centered_coeffs()
    if mode is Mode.RNS_ONLY:
        q = params.chain.q
        return tuple(centered(v, q) for v in poly.reconstruct())
    if mode is Mode.NTT_ONLY:
        back = to_coeff(poly, params.tables[0])
        return back.centered_coeffs()
    vecs = [to_coeff(lp, tab).coeffs for lp, tab in zip(poly.limbs, params.tables)]
    q = params.chain.q
    return tuple(centered(v, q) for v in crt_reconstruct(vecs, params.chain))


def _rep_uniform(params: SchemeParams, rng):
    mode = params.mode
    n = params.n
    if mode is Mode.VANILLA:
        vals = sample_uniform_bigints(rng, n, params.big_modulus.q)
        return BigPoly(tuple(vals), params.big_modulus)
    if mode is Mode.NTT_ONLY:
        m = params.chain.moduli[0]
        return RingPoly(tuple(sample_uniform_residues(rng, n, m.q)), m, Domain.EVAL)
    domain = Domain.EVAL if mode is Mode.RNS_NTT else Domain.COEFF
    limbs = []
    for m in params.chain.moduli:
        limbs.append(RingPoly(tuple(sample_uniform_residues(rng, n, m.q)), m, domain))
    return RnsPoly(tuple(limbs), params.chain)


def _sample_secret(params: SchemeParams, rng) -> np.ndarray:
    if params.hamming_weight > 0:
        return sample_ternary_sparse(rng, params.n, params.hamming_weight)
    return sample_ternary(rng, params.n)


def keygen(params: SchemeParams, seed: int) -> tuple[SecretKey, PublicKey]:
    """Derive a secret/public key pair from a seed.

    Draw order is fixed as secret, noise, then the uniform mask, so the
    small polynomials come out identical in every mode and only the
    mask, which cancels on decryption, differs in stream consumption.
    """
    rng = derive_rng(seed, "keygen")
    s_int = _sample_secret(params, rng)
    e0 = sample_gaussian_ints(rng, params.n, params.sigma)
    a = _rep_uniform(params, rng)
    s_rep = rep_from_signed(params, s_int)
    b = -(a * s_rep) + rep_from_signed(params, e0)
    return SecretKey(tuple(int(v) for v in s_int), s_rep), PublicKey(b=b, a=a)


def encode_pt(params: SchemeParams, values) -> Plaintext:
    """Encode real slot values into a stored plaintext."""
    ints = params.enc_ctx.encode(values, params.delta)
    return Plaintext(rep_from_signed(params, ints))


def decode_pt(params: SchemeParams, pt: Plaintext) -> np.ndarray:
    """Decode a stored plaintext back to real slot values."""
    return params.enc_ctx.decode(rep_to_centered(params, pt.poly), params.delta)


def encrypt_pk(params: SchemeParams, pt: Plaintext, pk: PublicKey,
               seed: int) -> Ciphertext:
    """Public-key encryption with seed-derived randomness."""
    rng = derive_rng(seed, "encrypt")
    v = sample_ternary(rng, params.n)
    e1 = sample_gaussian_ints(rng, params.n, params.sigma)
    e2 = sample_gaussian_ints(rng, params.n, params.sigma)
    v_rep = rep_from_signed(params, v)
    c0 = pk.b * v_rep + rep_from_signed(params, e1) + pt.poly
    c1 = pk.a * v_rep + rep_from_signed(params, e2)
    return Ciphertext(c0=c0, c1=c1)


def encrypt_sk(params: SchemeParams, pt: Plaintext, sk: SecretKey,
               seed: int) -> Ciphertext:
    """Secret-key encryption; the mask is drawn after the noise."""
    rng = derive_rng(seed, "encrypt")
    e = sample_gaussian_ints(rng, params.n, params.sigma)
    a = _rep_uniform(params, rng)
    c0 = -(a * sk.poly) + rep_from_signed(params, e) + pt.poly
    return Ciphertext(c0=c0, c1=a)


def decrypt(params: SchemeParams, ct: Ciphertext, sk: SecretKey) -> Plaintext:
    """Raw decryption c0 + c1*s; the result still carries the noise."""
    return Plaintext(ct.c0 + ct.c1 * sk.poly)
