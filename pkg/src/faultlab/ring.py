"""Polynomial rings Z_q[X]^n/(X^n + 1) with exact integer arithmetic.

Coefficients are kept as plain python ints, so nothing here can silently
overflow. Negacyclic products are exact: small rings use the obvious
double loop and larger ones pack coefficients into one big integer so a
single multiplication carries out the whole convolution.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import ParameterError, StateError

# First twelve primes. Sufficient witnesses to make Miller-Rabin exact
# for every modulus below 2**64.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime_u64(n: int) -> bool:
    """Deterministic Miller-Rabin primality test, exact for n < 2**64."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def find_ntt_prime(bits: int, n: int) -> int:
    """Largest prime q with q.bit_length() == bits and q = 1 (mod 2n).

    The congruence guarantees Z_q contains a primitive 2n-th root of
    unity, which is what the negacyclic transform needs.
    """
    if n < 2 or n & (n - 1):
        raise ParameterError(f"ring degree {n} must be a power of two >= 2")
    if bits > 64:
        raise ParameterError("prime search is limited to 64-bit moduli")
    m = 2 * n
    top = (1 << bits) - 1
    q = top - ((top - 1) % m)
    while q.bit_length() == bits and q > 1:
        if is_prime_u64(q):
            return q
        q -= m
    raise ParameterError(f"no {bits}-bit prime congruent to 1 mod {m}")


def find_primitive_root(q: int, order: int) -> int:
    """A primitive root of unity of the given power-of-two order mod q.

    Small moduli are scanned directly, which returns the smallest root.
    For large moduli that scan would almost never hit, so a base c is
    projected onto the order-`order` subgroup via t = c**((q-1)/order);
    each base succeeds with probability one half, and bases are tried in
    increasing order so the result is still deterministic.
    """
    if order < 2 or order & (order - 1):
        raise ParameterError(f"order {order} must be a power of two")
    if (q - 1) % order:
        raise ParameterError(f"{order} does not divide {q} - 1")
    half = order // 2
    for c in range(2, min(q, 1002)):
        if pow(c, half, q) == q - 1:
            return c
    exp = (q - 1) // order
    for c in range(2, 10002):
        t = pow(c, exp, q)
        if pow(t, half, q) == q - 1:
            return t
    raise ParameterError(f"no primitive root of order {order} mod {q}")


def centered(x: int, q: int) -> int:
    """Representative of x mod q with the smallest absolute value."""
    x = x % q
    return x - q if x > q // 2 else x


def _negacyclic_schoolbook(a, b, q: int, n: int) -> tuple[int, ...]:
    t = [0] * (2 * n)
    for i in range(n):
        ai = a[i]
        if ai:
            for j in range(n):
                t[i + j] += ai * b[j]
    return tuple((t[k] - t[k + n]) % q for k in range(n))


def _negacyclic_packed(a, b, q: int, n: int) -> tuple[int, ...]:
    # Pack each operand into one integer with fixed-width lanes, wide
    # enough that column sums of the convolution never touch the next
    # lane, then read the product back out lane by lane.
    bw = q.bit_length()
    stride_bits = 2 * bw + (n - 1).bit_length() + 1
    stride = (stride_bits + 7) // 8
    buf_a = bytearray(n * stride)
    buf_b = bytearray(n * stride)
    for i in range(n):
        buf_a[i * stride:(i + 1) * stride] = a[i].to_bytes(stride, "little")
        buf_b[i * stride:(i + 1) * stride] = b[i].to_bytes(stride, "little")
    prod = int.from_bytes(bytes(buf_a), "little") * int.from_bytes(bytes(buf_b), "little")
    raw = prod.to_bytes(2 * n * stride, "little")
    out = []
    for k in range(n):
        lo = int.from_bytes(raw[k * stride:(k + 1) * stride], "little")
        hi = int.from_bytes(raw[(k + n) * stride:(k + n + 1) * stride], "little")
        out.append((lo - hi) % q)
    return tuple(out)


def negacyclic_mul(a, b, q: int, n: int) -> tuple[int, ...]:
    """Exact product of two coefficient vectors in Z_q[X]/(X^n + 1).

    Inputs must hold residues in [0, q). The packed path and the double
    loop compute identical results; the split point only trades speed.
    """
    if n <= 32:
        return _negacyclic_schoolbook(a, b, q, n)
    return _negacyclic_packed(a, b, q, n)


class Domain(Enum):
    """Which basis a word-modulus polynomial is stored in."""

    COEFF = "coeff"
    EVAL = "eval"


@dataclass(frozen=True)
class PrimeModulus:
    """A word-size NTT-friendly prime together with its ring constants.

    psi is a primitive 2n-th root of unity, psi_inv its inverse and
    n_inv the inverse of the ring degree, all mod q.
    """

    q: int
    n: int
    psi: int
    psi_inv: int
    n_inv: int

    @classmethod
    def create(cls, q: int, n: int) -> "PrimeModulus":
        if n < 2 or n & (n - 1):
            raise ParameterError(f"ring degree {n} must be a power of two >= 2")
        if not is_prime_u64(q):
            raise ParameterError(f"{q} is not prime")
        if (q - 1) % (2 * n):
            raise ParameterError(f"{q} is not 1 mod {2 * n}")
        psi = find_primitive_root(q, 2 * n)
        return cls(q=q, n=n, psi=psi, psi_inv=pow(psi, -1, q), n_inv=pow(n, -1, q))


@dataclass(frozen=True)
class CompositeModulus:
    """An arbitrary-precision modulus given as a product of primes."""

    q: int
    factors: tuple[int, ...]
    n: int

    @classmethod
    def from_factors(cls, factors, n: int) -> "CompositeModulus":
        if n < 2 or n & (n - 1):
            raise ParameterError(f"ring degree {n} must be a power of two >= 2")
        factors = tuple(int(f) for f in factors)
        if not factors:
            raise ParameterError("at least one factor is required")
        q = 1
        for f in factors:
            q *= f
        return cls(q=q, factors=factors, n=n)


def _coerce_coeffs(coeffs, n: int) -> tuple[int, ...]:
    out = tuple(int(c) for c in coeffs)
    if len(out) != n:
        raise ParameterError(f"expected {n} coefficients, got {len(out)}")
    return out


@dataclass(frozen=True)
class RingPoly:
    """Polynomial over a single word-size prime, in either basis."""

    coeffs: tuple[int, ...]
    modulus: PrimeModulus
    domain: Domain = Domain.COEFF

    def __post_init__(self):
        coeffs = _coerce_coeffs(self.coeffs, self.modulus.n)
        q = self.modulus.q
        for c in coeffs:
            if not 0 <= c < q:
                raise ParameterError(f"coefficient {c} outside [0, {q})")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_signed(cls, coeffs, modulus: PrimeModulus,
                    domain: Domain = Domain.COEFF) -> "RingPoly":
        """Build a poly from arbitrary ints, reducing each mod q."""
        q = modulus.q
        return cls(tuple(int(c) % q for c in coeffs), modulus, domain)

    def _check(self, other: "RingPoly"):
        if self.modulus != other.modulus:
            raise StateError("operands live in different rings")
        if self.domain != other.domain:
            raise StateError("operands live in different domains")

    def __add__(self, other: "RingPoly") -> "RingPoly":
        self._check(other)
        q = self.modulus.q
        c = tuple((x + y) % q for x, y in zip(self.coeffs, other.coeffs))
        return RingPoly(c, self.modulus, self.domain)

    def __sub__(self, other: "RingPoly") -> "RingPoly":
        self._check(other)
        q = self.modulus.q
        c = tuple((x - y) % q for x, y in zip(self.coeffs, other.coeffs))
        return RingPoly(c, self.modulus, self.domain)

    def __neg__(self) -> "RingPoly":
        q = self.modulus.q
        return RingPoly(tuple(-x % q for x in self.coeffs), self.modulus, self.domain)

    def __mul__(self, other: "RingPoly") -> "RingPoly":
        """Ring product; pointwise in EVAL, negacyclic in COEFF."""
        self._check(other)
        q = self.modulus.q
        if self.domain is Domain.EVAL:
            c = tuple(x * y % q for x, y in zip(self.coeffs, other.coeffs))
        else:
            c = negacyclic_mul(self.coeffs, other.coeffs, q, self.modulus.n)
        return RingPoly(c, self.modulus, self.domain)

    def centered_coeffs(self) -> tuple[int, ...]:
        q = self.modulus.q
        return tuple(centered(c, q) for c in self.coeffs)

    def __repr__(self):
        return (f"RingPoly(n={self.modulus.n}, q={self.modulus.q}, "
                f"domain={self.domain.value})")


@dataclass(frozen=True)
class BigPoly:
    """Polynomial over an arbitrary-precision modulus, coefficient basis."""

    coeffs: tuple[int, ...]
    modulus: CompositeModulus

    def __post_init__(self):
        coeffs = _coerce_coeffs(self.coeffs, self.modulus.n)
        q = self.modulus.q
        for c in coeffs:
            if not 0 <= c < q:
                raise ParameterError(f"coefficient {c} outside [0, {q})")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_signed(cls, coeffs, modulus: CompositeModulus) -> "BigPoly":
        q = modulus.q
        return cls(tuple(int(c) % q for c in coeffs), modulus)

    def _check(self, other: "BigPoly"):
        if self.modulus != other.modulus:
            raise StateError("operands live in different rings")

    def __add__(self, other: "BigPoly") -> "BigPoly":
        self._check(other)
        q = self.modulus.q
        return BigPoly(tuple((x + y) % q for x, y in zip(self.coeffs, other.coeffs)),
                       self.modulus)

    def __sub__(self, other: "BigPoly") -> "BigPoly":
        self._check(other)
        q = self.modulus.q
        return BigPoly(tuple((x - y) % q for x, y in zip(self.coeffs, other.coeffs)),
                       self.modulus)

    def __neg__(self) -> "BigPoly":
        q = self.modulus.q
        return BigPoly(tuple(-x % q for x in self.coeffs), self.modulus)

    def __mul__(self, other: "BigPoly") -> "BigPoly":
        self._check(other)
        q = self.modulus.q
        return BigPoly(negacyclic_mul(self.coeffs, other.coeffs, q, self.modulus.n),
                       self.modulus)

    def centered_coeffs(self) -> tuple[int, ...]:
        q = self.modulus.q
        return tuple(centered(c, q) for c in self.coeffs)

    def __repr__(self):
        return f"BigPoly(n={self.modulus.n}, bits={self.modulus.q.bit_length()})"
