"""Slot-space error metrics and the three-way severity classification.

A trial is scored by comparing faulty decoded slots against the golden
decode of the same pipeline. Per-slot relative error falls back to a
scaled absolute error below a floor tied to the mean magnitude of the
golden output, so slots that happen to sit near zero do not dominate
the verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

DEFAULT_TAU = 1e-3

CSV_HEADER = ["mode", "N", "q0_bits", "L", "delta_log2", "slots",
              "stage", "target", "limb", "coeff", "bit", "wrapped",
              "scheme_seed", "input_seed", "l2", "mse", "frac_correct",
              "category"]


class Category(Enum):
    ROBUST = "robust"
    APPLICATION_DEPENDENT = "app_dependent"
    CATASTROPHIC = "catastrophic"


def l2_error(golden, faulty) -> float:
    """Euclidean norm of the slot-space deviation."""
    g = np.asarray(golden, dtype=np.float64)
    f = np.asarray(faulty, dtype=np.float64)
    return float(np.linalg.norm(f - g))


def mse(golden, faulty) -> float:
    """Root mean squared slot deviation."""
    g = np.asarray(golden, dtype=np.float64)
    f = np.asarray(faulty, dtype=np.float64)
    return float(np.sqrt(np.mean((f - g) ** 2)))


def relative_errors(golden, faulty, tau: float = DEFAULT_TAU) -> np.ndarray:
    """Per-slot relative error with an absolute floor for tiny slots.

    Slots whose golden magnitude is at least the floor use the plain
    relative error. Below the floor the error is tau * |delta| / floor,
    which equals tau exactly when |delta| matches the floor, so the
    correctness test is scale-consistent on both sides of the cut.
    """
    g = np.asarray(golden, dtype=np.float64)
    f = np.asarray(faulty, dtype=np.float64)
    delta = np.abs(f - g)
    floor = tau * (np.mean(np.abs(g)) + np.finfo(np.float64).eps)
    out = np.empty_like(delta)
    big = np.abs(g) >= floor
    out[big] = delta[big] / np.abs(g[big])
    out[~big] = tau * delta[~big] / floor
    return out


def frac_correct(golden, faulty, tau: float = DEFAULT_TAU) -> float:
    """Fraction of slots whose relative error stays within tau."""
    return float(np.mean(relative_errors(golden, faulty, tau) <= tau))


def classify(frac: float) -> Category:
    """Map a correct-slot fraction to a severity bucket.

    Above 0.99 the fault effectively did not reach the application;
    below 0.01 the whole output is garbage; anything between depends on
    which slots the application actually consumes.
    """
    if frac > 0.99:
        return Category.ROBUST
    if frac < 0.01:
        return Category.CATASTROPHIC
    return Category.APPLICATION_DEPENDENT


def score_trial(golden, faulty, tau: float = DEFAULT_TAU):
    """(l2, mse, frac_correct, category) for one faulty decode."""
    fc = frac_correct(golden, faulty, tau)
    return l2_error(golden, faulty), mse(golden, faulty), fc, classify(fc)


@dataclass(frozen=True)
class TrialRecord:
    """One CSV row: scheme coordinates, fault address and scores.

    Golden rows use stage "golden", target "-" and -1 for the fault
    address fields; their scores compare the golden decode to the ideal
    (pre-encode) slot values, so l2 there reads out the baseline noise.
    """

    mode: str
    N: int
    q0_bits: int
    L: int
    delta_log2: int
    slots: int
    stage: str
    target: str
    limb: int
    coeff: int
    bit: int
    wrapped: int
    scheme_seed: int
    input_seed: int
    l2: float
    mse: float
    frac_correct: float
    category: str

    def to_row(self) -> list[str]:
        vals = [getattr(self, name) for name in CSV_HEADER]
        out = []
        for v in vals:
            out.append(repr(v) if isinstance(v, float) else str(v))
        return out

    @classmethod
    def from_row(cls, row) -> "TrialRecord":
        if len(row) != len(CSV_HEADER):
            raise ValueError(f"expected {len(CSV_HEADER)} columns, got {len(row)}")
        kw = dict(zip(CSV_HEADER, row))
        for name in ("N", "q0_bits", "L", "delta_log2", "slots", "limb",
                     "coeff", "bit", "wrapped", "scheme_seed", "input_seed"):
            kw[name] = int(kw[name])
        for name in ("l2", "mse", "frac_correct"):
            kw[name] = float(kw[name])
        return cls(**kw)
