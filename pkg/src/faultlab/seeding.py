"""Deterministic random stream derivation and sampling helpers.

Every random draw in the package flows through a Generator produced by
derive_rng, which hashes a 64-bit master seed together with a list of
string labels. Two call sites that pass the same seed and labels get
bit-identical streams on any platform, and distinct label paths give
independent streams. That property is what makes fault campaigns and
cross-mode comparisons reproducible.
"""

from __future__ import annotations

import hashlib
import struct

import numpy as np

from .errors import ParameterError

_MASK64 = (1 << 64) - 1


def derive_rng(master_seed: int, *labels) -> np.random.Generator:
    """Return a PCG64 Generator keyed by (master_seed, labels).

    The seed material is SHA-256 over the big-endian 8-byte seed followed
    by each label rendered as UTF-8, with a 0x1f unit separator in front
    of every label so that ("ab", "c") and ("a", "bc") differ.
    """
    h = hashlib.sha256()
    h.update(struct.pack(">Q", int(master_seed) & _MASK64))
    for label in labels:
        h.update(b"\x1f")
        h.update(str(label).encode("utf-8"))
    state = int.from_bytes(h.digest(), "big")
    return np.random.Generator(np.random.PCG64(state))


def sample_ternary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform vector over {-1, 0, 1} of length n, dtype int64."""
    return rng.integers(-1, 2, size=n, dtype=np.int64)


def sample_ternary_sparse(rng: np.random.Generator, n: int, hamming_weight: int) -> np.ndarray:
    """Ternary vector with exactly hamming_weight nonzero entries.

    Positions are chosen without replacement and each nonzero entry is
    +1 or -1 with equal probability.
    """
    if not 0 <= hamming_weight <= n:
        raise ParameterError(f"hamming_weight {hamming_weight} out of range for n={n}")
    out = np.zeros(n, dtype=np.int64)
    idx = rng.choice(n, size=hamming_weight, replace=False)
    signs = rng.integers(0, 2, size=hamming_weight, dtype=np.int64) * 2 - 1
    out[idx] = signs
    return out


def sample_gaussian_ints(rng: np.random.Generator, n: int, sigma: float) -> np.ndarray:
    """Discretised centered Gaussian with standard deviation sigma.

    Real draws are clipped to +/- 6 sigma and rounded half away from
    zero, so entries are bounded integers (|e| <= ceil(6 sigma)).
    """
    raw = rng.normal(0.0, sigma, size=n)
    np.clip(raw, -6.0 * sigma, 6.0 * sigma, out=raw)
    return np.sign(raw).astype(np.int64) * np.floor(np.abs(raw) + 0.5).astype(np.int64)


def sample_uniform_residues(rng: np.random.Generator, n: int, q: int) -> np.ndarray:
    """Uniform vector over [0, q) for a modulus that fits in a word."""
    if not 1 < q < (1 << 63):
        raise ParameterError(f"modulus {q} not sampleable as int64 residues")
    return rng.integers(0, q, size=n, dtype=np.int64)


def sample_uniform_bigints(rng: np.random.Generator, n: int, q: int) -> list[int]:
    """Uniform python ints over [0, q) for an arbitrary-size modulus.

    Uses rejection sampling on fixed-width chunks drawn from the stream,
    so the result is exactly uniform and reproducible.
    """
    if q < 2:
        raise ParameterError(f"modulus {q} too small")
    nbits = q.bit_length()
    nwords = (nbits + 63) // 64
    top_shift = nwords * 64 - nbits
    out: list[int] = []
    while len(out) < n:
        # Draw a batch of candidates; expected acceptance is > 1/2.
        batch = max(n - len(out), 8)
        words = rng.integers(0, 1 << 63, size=(batch, 2 * nwords), dtype=np.int64)
        for row in words:
            val = 0
            for k in range(nwords):
                # Two 63-bit draws splice into one 64-bit word.
                w = (int(row[2 * k]) << 1) ^ (int(row[2 * k + 1]) & 1)
                val |= w << (64 * k)
            val >>= top_shift
            if val < q:
                out.append(val)
                if len(out) == n:
                    break
    return out
