"""Slot encoding and number-theoretic transforms.

The encoder maps complex-embedding slots to integer polynomial
coefficients and back. All floating arithmetic here runs in 80-bit
extended precision (numpy longdouble on x86); ordinary doubles leave
round-trip noise above the error budget once the scale passes 2**45
or so, extended precision keeps a comfortable margin.

The NTT side is exact integer arithmetic: a negacyclic transform built
from a pre-twist by powers of psi followed by a standard iterative
cyclic transform with omega = psi**2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, StateError
from .ring import Domain, PrimeModulus, RingPoly

_PI_LD = np.longdouble("3.141592653589793238462643383279502884")


def int_to_longdouble(x: int) -> np.longdouble:
    """Convert an arbitrary-size int to longdouble without a float64 detour.

    Going through python float would truncate the mantissa to 53 bits;
    accumulating 32-bit limbs keeps all 64.
    """
    neg = x < 0
    mag = -x if neg else x
    limbs = []
    while mag:
        limbs.append(mag & 0xFFFFFFFF)
        mag >>= 32
    out = np.longdouble(0.0)
    scale = np.longdouble(4294967296.0)
    for limb in reversed(limbs):
        out = out * scale + np.longdouble(limb)
    return -out if neg else out


def _round_half_away(x: np.ndarray) -> np.ndarray:
    return np.sign(x) * np.floor(np.abs(x) + np.longdouble(0.5))


@dataclass(frozen=True)
class EncodingContext:
    """Slot encoder for Z[X]/(X^n + 1) with a power-of-two slot count.

    slots values are packed into the subring generated by X**gap, a copy
    of Z[Y]/(Y^m + 1) with m = 2*slots and gap = (n/2)/slots. B holds the
    first `slots` rows of the m-point evaluation matrix
    B[r, c] = exp(-2*pi*i*(2r+1)*c/(2m)); the remaining rows are
    conjugate mirrors, so this block is all encode and decode need.
    """

    n: int
    slots: int
    gap: int
    m: int
    B: np.ndarray

    @classmethod
    def create(cls, n: int, slots: int) -> "EncodingContext":
        if n < 4 or n & (n - 1):
            raise ParameterError(f"ring degree {n} must be a power of two >= 4")
        if slots < 1 or slots & (slots - 1):
            raise ParameterError(f"slot count {slots} must be a power of two >= 1")
        if slots > n // 2:
            raise ParameterError(f"slot count {slots} exceeds capacity {n // 2}")
        m = 2 * slots
        gap = (n // 2) // slots
        r = np.arange(slots, dtype=np.int64)
        c = np.arange(m, dtype=np.int64)
        exps = ((2 * r[:, None] + 1) * c[None, :]) % (2 * m)
        theta = exps.astype(np.longdouble) * (_PI_LD / m)
        B = np.empty((slots, m), dtype=np.clongdouble)
        B.real = np.cos(theta)
        B.imag = -np.sin(theta)
        return cls(n=n, slots=slots, gap=gap, m=m, B=B)

    def support_indices(self) -> tuple[int, ...]:
        """Coefficient indices the encoding actually writes and reads."""
        return tuple(range(0, self.n, self.gap))

    def encode(self, values, delta: int) -> list[int]:
        """Scale real slot values by delta and round onto the subring.

        Returns n signed integer coefficients; all entries off the
        support lattice are zero. For real inputs the inverse embedding
        reduces to (2/m) * Re(B^T z), which is what is computed here.
        """
        z = np.asarray(values, dtype=np.longdouble)
        if z.shape != (self.slots,):
            raise ParameterError(f"expected {self.slots} values, got {z.shape}")
        if delta <= 0:
            raise ParameterError("delta must be positive")
        acc = self.B.T @ z.astype(np.clongdouble)
        p = acc.real * (np.longdouble(2.0) / self.m)
        scaled = _round_half_away(p * int_to_longdouble(delta))
        out = [0] * self.n
        for t in range(self.m):
            out[t * self.gap] = int(scaled[t])
        return out

    def decode(self, centered_coeffs, delta: int) -> np.ndarray:
        """Evaluate the support coefficients back into real slot values.

        centered_coeffs is the full length-n vector of signed (centered)
        coefficients; only the support lattice contributes.
        """
        if len(centered_coeffs) != self.n:
            raise ParameterError(f"expected {self.n} coefficients")
        sup = centered_coeffs[::self.gap]
        u = np.array([int_to_longdouble(int(v)) for v in sup], dtype=np.longdouble)
        u /= int_to_longdouble(delta)
        slots = self.B @ u.astype(np.clongdouble)
        return slots.real.astype(np.float64)


def predict_l2_norm(n: int, slots: int, delta: int, modulus: int,
                    coeff_index: int, bit_index: int) -> float:
    """Predicted slot-space l2 norm of a single stored-bit flip.

    Flipping bit j of a coefficient residue changes its centered value
    by +/- 2**j, reduced mod the modulus, so the magnitude is
    min(2**j, modulus - 2**j). That lands on decode column t = index/gap
    and spreads over the slots with per-slot weight cos(pi*a/m),
    a = (2r+1)t mod 2m. Off-support indices decode to nothing and
    predict exactly 0.0, as do columns whose angles all sit on the
    imaginary axis; those two cases are detected arithmetically rather
    than through floating cosines.
    """
    if not 0 <= coeff_index < n:
        raise ParameterError(f"coefficient index {coeff_index} outside [0, {n})")
    if bit_index < 0 or (1 << bit_index) >= modulus:
        raise ParameterError(f"bit {bit_index} outside the modulus width")
    gap = (n // 2) // slots
    if coeff_index % gap:
        return 0.0
    t = coeff_index // gap
    m = 2 * slots
    b = 1 << bit_index
    mag = min(b, modulus - b)
    sumsq = np.longdouble(0.0)
    for r in range(slots):
        a = ((2 * r + 1) * t) % (2 * m)
        if 2 * a == m or 2 * a == 3 * m:
            continue
        cs = np.cos(_PI_LD * a / m)
        sumsq += cs * cs
    scale = int_to_longdouble(mag) / int_to_longdouble(delta)
    return float(scale * np.sqrt(sumsq))


def _bit_reverse_indices(n: int) -> tuple[int, ...]:
    bits = n.bit_length() - 1
    out = []
    for i in range(n):
        r = 0
        x = i
        for _ in range(bits):
            r = (r << 1) | (x & 1)
            x >>= 1
        out.append(r)
    return tuple(out)


@dataclass(frozen=True)
class NttTables:
    """Precomputed power tables for one prime modulus."""

    modulus: PrimeModulus
    psi_pows: tuple[int, ...]
    psi_inv_pows: tuple[int, ...]
    omega_pows: tuple[int, ...]
    omega_inv_pows: tuple[int, ...]
    brev: tuple[int, ...]

    @classmethod
    def create(cls, modulus: PrimeModulus) -> "NttTables":
        q, n, psi = modulus.q, modulus.n, modulus.psi
        if pow(psi, n, q) != q - 1:
            raise ParameterError("psi is not a primitive 2n-th root of unity")
        psi_pows = [1] * n
        psi_inv_pows = [1] * n
        for i in range(1, n):
            psi_pows[i] = psi_pows[i - 1] * psi % q
            psi_inv_pows[i] = psi_inv_pows[i - 1] * modulus.psi_inv % q
        omega = psi * psi % q
        omega_inv = modulus.psi_inv * modulus.psi_inv % q
        half = max(n // 2, 1)
        omega_pows = [1] * half
        omega_inv_pows = [1] * half
        for i in range(1, half):
            omega_pows[i] = omega_pows[i - 1] * omega % q
            omega_inv_pows[i] = omega_inv_pows[i - 1] * omega_inv % q
        return cls(modulus=modulus,
                   psi_pows=tuple(psi_pows),
                   psi_inv_pows=tuple(psi_inv_pows),
                   omega_pows=tuple(omega_pows),
                   omega_inv_pows=tuple(omega_inv_pows),
                   brev=_bit_reverse_indices(n))


def _cyclic_transform(vec, pows, q: int, brev) -> list[int]:
    # Iterative radix-2 transform: bit-reversed copy in, natural order
    # out, out[r] = sum_c vec[c] * omega**(r*c) with omega = pows[1].
    n = len(vec)
    a = [vec[i] for i in brev]
    size = 2
    while size <= n:
        half = size // 2
        step = n // size
        for start in range(0, n, size):
            for j in range(half):
                w = pows[step * j]
                t = w * a[start + j + half] % q
                u = a[start + j]
                a[start + j] = (u + t) % q
                a[start + j + half] = (u - t) % q
        size *= 2
    return a


def ntt_forward(coeffs, tables: NttTables) -> tuple[int, ...]:
    """Negacyclic forward transform, natural order in and out.

    Computes out[r] = sum_c coeffs[c] * psi**((2r+1)*c) mod q, the
    evaluations at odd powers of psi. The pre-twist by psi**c folds the
    negacyclic structure into a plain cyclic transform.
    """
    q = tables.modulus.q
    n = tables.modulus.n
    twisted = [coeffs[c] * tables.psi_pows[c] % q for c in range(n)]
    return tuple(_cyclic_transform(twisted, tables.omega_pows, q, tables.brev))


def ntt_inverse(values, tables: NttTables) -> tuple[int, ...]:
    """Inverse of ntt_forward; exact round trip on any residue vector."""
    q = tables.modulus.q
    n = tables.modulus.n
    n_inv = tables.modulus.n_inv
    a = _cyclic_transform(list(values), tables.omega_inv_pows, q, tables.brev)
    return tuple(a[c] * n_inv % q * tables.psi_inv_pows[c] % q for c in range(n))


def to_eval(poly: RingPoly, tables: NttTables) -> RingPoly:
    if poly.domain is not Domain.COEFF:
        raise StateError("poly already in evaluation domain")
    if poly.modulus != tables.modulus:
        raise StateError("tables belong to a different modulus")
    return RingPoly(ntt_forward(poly.coeffs, tables), poly.modulus, Domain.EVAL)


def to_coeff(poly: RingPoly, tables: NttTables) -> RingPoly:
    if poly.domain is not Domain.EVAL:
        raise StateError("poly already in coefficient domain")
    if poly.modulus != tables.modulus:
        raise StateError("tables belong to a different modulus")
    return RingPoly(ntt_inverse(poly.coeffs, tables), poly.modulus, Domain.COEFF)
