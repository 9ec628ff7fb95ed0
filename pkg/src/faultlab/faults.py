"""Deterministic single-bit fault injection into pipeline artifacts.

A fault is addressed by (stage, target, limb, coeff, bit) and rendered
canonically as the colon-joined string "stage:target:limb:coeff:bit".
Injection XORs one bit of one stored word. By default the word that is
actually stored gets flipped, so in evaluation-basis modes the flip
lands on an NTT-domain residue; passing coefficient_space=True instead
transforms to the coefficient basis, flips there and transforms back.

When the flipped word leaves [0, modulus) the value is reduced and the
injection reports wrapped=True, mirroring how the following modular
arithmetic would absorb it.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .errors import ParameterError, TrialError
from .ring import BigPoly, Domain, RingPoly
from .rns import RnsPoly
from .scheme import Ciphertext, Mode, Plaintext, SchemeParams
from .seeding import derive_rng
from .transforms import to_coeff, to_eval


class Stage(Enum):
    """Where in the pipeline the flip happens."""

    POST_ENCODE = "post_encode"
    POST_ENCRYPT = "post_encrypt"
    PRE_DECODE = "pre_decode"


class Target(Enum):
    """Which artifact the flip lands on."""

    PLAINTEXT = "plaintext"
    C0 = "c0"
    C1 = "c1"


_VALID_PAIRS = {
    (Stage.POST_ENCODE, Target.PLAINTEXT),
    (Stage.POST_ENCRYPT, Target.C0),
    (Stage.POST_ENCRYPT, Target.C1),
    (Stage.PRE_DECODE, Target.PLAINTEXT),
}


@dataclass(frozen=True)
class FaultSpec:
    """One addressable single-bit fault."""

    stage: Stage
    target: Target
    limb: int
    coeff: int
    bit: int

    def __post_init__(self):
        if (self.stage, self.target) not in _VALID_PAIRS:
            raise ParameterError(
                f"target {self.target.value} does not exist at stage {self.stage.value}")
        if self.limb < 0 or self.coeff < 0 or self.bit < 0:
            raise ParameterError("limb, coeff and bit must be non-negative")

    @property
    def text(self) -> str:
        return (f"{self.stage.value}:{self.target.value}:"
                f"{self.limb}:{self.coeff}:{self.bit}")

    @classmethod
    def parse(cls, text: str) -> "FaultSpec":
        parts = text.split(":")
        if len(parts) != 5:
            raise ParameterError(f"malformed fault spec {text!r}")
        stage, target, limb, coeff, bit = parts
        try:
            return cls(Stage(stage), Target(target), int(limb), int(coeff), int(bit))
        except ValueError as exc:
            raise ParameterError(f"malformed fault spec {text!r}: {exc}") from None


def flip_bit(value: int, bit: int, modulus: int) -> tuple[int, bool]:
    """XOR one bit into a residue; report whether it left [0, modulus)."""
    flipped = value ^ (1 << bit)
    return flipped % modulus, flipped >= modulus


@dataclass(frozen=True, eq=False)
class PipelineState:
    """Artifacts of one golden pipeline run, ready for injection."""

    params: SchemeParams
    pt: Plaintext
    ct: Ciphertext
    decrypted: Plaintext


def injectable_limbs(params: SchemeParams) -> int:
    """Stored words per coefficient. Vanilla big ints are one word."""
    if params.mode is Mode.VANILLA:
        return 1
    return params.num_limbs


def _flip_ring_poly(poly: RingPoly, coeff: int, bit: int, params: SchemeParams,
                    coefficient_space: bool) -> tuple[RingPoly, bool]:
    q = poly.modulus.q
    if coefficient_space and poly.domain is Domain.EVAL:
        tab = next(t for t in params.tables if t.modulus == poly.modulus)
        work = to_coeff(poly, tab)
        new_val, wrapped = flip_bit(work.coeffs[coeff], bit, q)
        coeffs = list(work.coeffs)
        coeffs[coeff] = new_val
        return to_eval(RingPoly(tuple(coeffs), work.modulus, Domain.COEFF), tab), wrapped
    new_val, wrapped = flip_bit(poly.coeffs[coeff], bit, q)
    coeffs = list(poly.coeffs)
    coeffs[coeff] = new_val
    return RingPoly(tuple(coeffs), poly.modulus, poly.domain), wrapped


def flip_in_rep(params: SchemeParams, poly, limb: int, coeff: int, bit: int,
                coefficient_space: bool = False):
    """Flip one stored bit of a ring element; returns (new_poly, wrapped)."""
    if not 0 <= coeff < params.n:
        raise TrialError(f"coefficient {coeff} outside [0, {params.n})")
    if not 0 <= limb < injectable_limbs(params):
        raise TrialError(f"limb {limb} does not exist in mode {params.mode.value}")
    if not 0 <= bit < params.word_bits:
        raise TrialError(f"bit {bit} outside the {params.word_bits}-bit word")
    if isinstance(poly, BigPoly):
        q = poly.modulus.q
        new_val, wrapped = flip_bit(poly.coeffs[coeff], bit, q)
        coeffs = list(poly.coeffs)
        coeffs[coeff] = new_val
        return BigPoly(tuple(coeffs), poly.modulus), wrapped
    if isinstance(poly, RnsPoly):
        new_limb, wrapped = _flip_ring_poly(poly.limbs[limb], coeff, bit,
                                            params, coefficient_space)
        limbs = list(poly.limbs)
        limbs[limb] = new_limb
        return RnsPoly(tuple(limbs), poly.chain), wrapped
    return _flip_ring_poly(poly, coeff, bit, params, coefficient_space)


def inject(state: PipelineState, spec: FaultSpec,
           coefficient_space: bool = False) -> tuple[PipelineState, bool]:
    """Apply one fault to the appropriate artifact of a pipeline state."""
    params = state.params
    if spec.stage is Stage.POST_ENCODE:
        poly, wrapped = flip_in_rep(params, state.pt.poly, spec.limb, spec.coeff,
                                    spec.bit, coefficient_space)
        return replace(state, pt=Plaintext(poly)), wrapped
    if spec.stage is Stage.PRE_DECODE:
        poly, wrapped = flip_in_rep(params, state.decrypted.poly, spec.limb,
                                    spec.coeff, spec.bit, coefficient_space)
        return replace(state, decrypted=Plaintext(poly)), wrapped
    if spec.target is Target.C0:
        poly, wrapped = flip_in_rep(params, state.ct.c0, spec.limb, spec.coeff,
                                    spec.bit, coefficient_space)
        return replace(state, ct=Ciphertext(c0=poly, c1=state.ct.c1)), wrapped
    poly, wrapped = flip_in_rep(params, state.ct.c1, spec.limb, spec.coeff,
                                spec.bit, coefficient_space)
    return replace(state, ct=Ciphertext(c0=state.ct.c0, c1=poly)), wrapped


class FaultSpace:
    """Lazily indexable enumeration in (stage, target, limb, coeff, bit) order.

    Spaces grow as limbs * degree * word bits per reachable stage/target
    pair, which at scale runs into the millions, so specs are built on
    demand from a flat index instead of being materialized.
    """

    def __init__(self, params: SchemeParams, stages=None, targets=None,
                 limbs=None, coeffs=None, bits=None):
        stages = list(Stage) if stages is None else list(stages)
        targets = list(Target) if targets is None else list(targets)
        self.pairs = [(s, t) for s in stages for t in targets
                      if (s, t) in _VALID_PAIRS]
        self.limbs = (list(range(injectable_limbs(params)))
                      if limbs is None else list(limbs))
        self.coeffs = list(range(params.n)) if coeffs is None else list(coeffs)
        self.bits = (list(range(params.word_bits))
                     if bits is None else list(bits))
        self._block = len(self.limbs) * len(self.coeffs) * len(self.bits)

    def __len__(self) -> int:
        return len(self.pairs) * self._block

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return [self[i] for i in range(*idx.indices(len(self)))]
        if idx < 0:
            idx += len(self)
        if not 0 <= idx < len(self):
            raise IndexError(idx)
        pair, rem = divmod(idx, self._block)
        stage, target = self.pairs[pair]
        limb, rem = divmod(rem, len(self.coeffs) * len(self.bits))
        coeff, bit = divmod(rem, len(self.bits))
        return FaultSpec(stage, target, self.limbs[limb],
                         self.coeffs[coeff], self.bits[bit])

    def __iter__(self):
        for stage, target in self.pairs:
            for limb in self.limbs:
                for coeff in self.coeffs:
                    for bit in self.bits:
                        yield FaultSpec(stage, target, limb, coeff, bit)


def enumerate_faults(params: SchemeParams, stages=None, targets=None,
                     limbs=None, coeffs=None, bits=None):
    """Yield fault specs in (stage, target, limb, coeff, bit) order.

    Invalid stage/target combinations are skipped, so passing every
    stage together with every target enumerates exactly the reachable
    faults once.
    """
    return iter(FaultSpace(params, stages, targets, limbs, coeffs, bits))


def _as_sequence(specs):
    if hasattr(specs, "__len__") and hasattr(specs, "__getitem__"):
        return specs
    return list(specs)


@dataclass(frozen=True)
class Exhaustive:
    """Keep every enumerated fault."""

    def select(self, specs) -> list[FaultSpec]:
        return list(specs)


@dataclass(frozen=True)
class Strided:
    """Keep every step-th fault, starting at offset."""

    step: int
    offset: int = 0

    def select(self, specs) -> list[FaultSpec]:
        if self.step < 1:
            raise ParameterError("stride step must be >= 1")
        seq = _as_sequence(specs)
        return [seq[i] for i in range(self.offset, len(seq), self.step)]


@dataclass(frozen=True)
class RandomSubset:
    """Keep a seeded uniform sample, preserving enumeration order."""

    count: int
    seed: int

    def select(self, specs) -> list[FaultSpec]:
        seq = _as_sequence(specs)
        if self.count >= len(seq):
            return list(seq)
        rng = derive_rng(self.seed, "fault-sampling")
        idx = rng.choice(len(seq), size=self.count, replace=False)
        return [seq[i] for i in sorted(idx)]
