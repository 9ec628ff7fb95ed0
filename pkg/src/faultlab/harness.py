"""Campaign harness: golden runs, fault trials and CSV records.

An experiment is a scheme parameter set, a fault enumeration with a
sampling rule, and lists of scheme and input seeds. Every (scheme seed,
input seed) pair gets one golden pipeline run and one trial per sampled
fault. Trials reuse the golden run's heavy intermediates: a flip on the
plaintext or c0 moves exactly one decrypted coefficient, so only that
coefficient is re-reduced and only one decode column is re-evaluated.
A periodic audit recomputes a trial through the full pipeline and cross
checks the shortcut.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, TrialError
from .faults import (Exhaustive, FaultSpec, PipelineState, RandomSubset, Stage,
                     FaultSpace, Strided, Target, enumerate_faults, inject)
from .metrics import (CSV_HEADER, DEFAULT_TAU, TrialRecord, classify,
                      frac_correct, l2_error, score_trial)
from .ring import centered
from .scheme import (Ciphertext, Mode, Plaintext, SchemeParams, decode_pt,
                     decrypt, encode_pt, encrypt_pk, keygen, rep_to_centered)
from .seeding import derive_rng
from .transforms import int_to_longdouble

_STAGE_NAMES = tuple(s.value for s in Stage)
_TARGET_NAMES = tuple(t.value for t in Target)

_INT_KEYS = {"N", "q0_bits", "num_limbs", "delta_log2", "slots",
             "hamming_weight", "sample_count", "sample_seed", "stride"}
_FLOAT_KEYS = {"sigma", "input_lo", "input_hi", "tau"}
_INT_LIST_KEYS = {"scheme_seeds", "input_seeds"}
_STR_LIST_KEYS = {"stages", "targets"}
_STR_KEYS = {"mode", "sampling", "input_file", "out"}
_ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _INT_LIST_KEYS | _STR_LIST_KEYS | _STR_KEYS


@dataclass
class ExperimentConfig:
    """Flat description of one campaign; every field maps to a config key."""

    mode: str
    n: int
    q0_bits: int
    num_limbs: int = 1
    delta_log2: int = 40
    slots: int | None = None
    hamming_weight: int = 0
    sigma: float = 3.2
    stages: tuple[str, ...] = _STAGE_NAMES
    targets: tuple[str, ...] = _TARGET_NAMES
    sampling: str = "exhaustive"
    sample_count: int = 100
    sample_seed: int = 0
    stride: int = 1
    scheme_seeds: tuple[int, ...] = (0,)
    input_seeds: tuple[int, ...] = (0,)
    input_lo: float = -1.0
    input_hi: float = 1.0
    input_file: str | None = None
    tau: float = DEFAULT_TAU
    out: str = "results.csv"

    def to_params(self) -> SchemeParams:
        return SchemeParams(mode=self.mode, n=self.n, q0_bits=self.q0_bits,
                            num_limbs=self.num_limbs, delta_log2=self.delta_log2,
                            slots=self.slots, hamming_weight=self.hamming_weight,
                            sigma=self.sigma)

    def sampler(self):
        if self.sampling == "exhaustive":
            return Exhaustive()
        if self.sampling == "strided":
            return Strided(step=self.stride)
        if self.sampling == "random":
            return RandomSubset(count=self.sample_count, seed=self.sample_seed)
        raise ConfigError(f"unknown sampling rule {self.sampling!r}")


def parse_config(text: str) -> ExperimentConfig:
    """Parse the flat key=value config format.

    Lines are `key = value`, blank lines and text after '#' are
    ignored. List-valued keys take comma-separated entries; an empty
    value means the empty list, so `stages =` yields a golden-only run.
    Unknown keys are rejected rather than silently dropped.
    """
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            if key in _INT_KEYS:
                values[key] = int(val)
            elif key in _FLOAT_KEYS:
                values[key] = float(val)
            elif key in _INT_LIST_KEYS:
                values[key] = tuple(int(v) for v in val.split(",") if v.strip())
            elif key in _STR_LIST_KEYS:
                values[key] = tuple(v.strip() for v in val.split(",") if v.strip())
            else:
                values[key] = val
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from None
    for required in ("mode", "N", "q0_bits"):
        if required not in values:
            raise ConfigError(f"missing required key {required!r}")
    for name in values.get("stages", ()):
        if name not in _STAGE_NAMES:
            raise ConfigError(f"unknown stage {name!r}")
    for name in values.get("targets", ()):
        if name not in _TARGET_NAMES:
            raise ConfigError(f"unknown target {name!r}")
    if "sampling" in values and values["sampling"] not in ("exhaustive", "strided", "random"):
        raise ConfigError(f"unknown sampling rule {values['sampling']!r}")
    values["n"] = values.pop("N")
    return ExperimentConfig(**values)


def load_config(path: str) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        cfg = parse_config(fh.read())
    if cfg.input_file and not os.path.isabs(cfg.input_file):
        cfg.input_file = os.path.join(os.path.dirname(os.path.abspath(path)),
                                      cfg.input_file)
    return cfg


def make_input(slots: int, input_seed: int, lo: float, hi: float) -> np.ndarray:
    """Seed-derived uniform slot values in [lo, hi)."""
    rng = derive_rng(input_seed, "input")
    return rng.uniform(lo, hi, size=slots)


def load_input_vector(path: str, slots: int) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        toks = fh.read().replace(",", " ").split()
    vec = np.array([float(t) for t in toks], dtype=np.float64)
    if vec.shape != (slots,):
        raise ConfigError(f"input file holds {vec.size} values, expected {slots}")
    return vec


@dataclass
class GoldenRun:
    """One fault-free pipeline run with everything trials need."""

    params: SchemeParams
    scheme_seed: int
    input_seed: int
    values: np.ndarray
    sk: object
    pk: object
    state: PipelineState
    centered_coeffs: tuple[int, ...]
    out: np.ndarray

    @property
    def decrypted(self) -> Plaintext:
        return self.state.decrypted

    def golden_record(self, tau: float = DEFAULT_TAU) -> TrialRecord:
        """Baseline row: golden decode scored against the ideal inputs."""
        l2v, msev, fc, cat = score_trial(self.values, self.out, tau)
        return TrialRecord(**self.params.describe(), stage="golden", target="-",
                           limb=-1, coeff=-1, bit=-1, wrapped=0,
                           scheme_seed=self.scheme_seed, input_seed=self.input_seed,
                           l2=l2v, mse=msev, frac_correct=fc, category=cat.value)


def build_golden(params: SchemeParams, scheme_seed: int, input_seed: int,
                 lo: float = -1.0, hi: float = 1.0,
                 vector: np.ndarray | None = None) -> GoldenRun:
    sk, pk = keygen(params, scheme_seed)
    if vector is None:
        values = make_input(params.slots, input_seed, lo, hi)
    else:
        values = np.asarray(vector, dtype=np.float64)
    pt = encode_pt(params, values)
    ct = encrypt_pk(params, pt, pk, input_seed)
    dec = decrypt(params, ct, sk)
    cent = rep_to_centered(params, dec.poly)
    out = params.enc_ctx.decode(cent, params.delta)
    state = PipelineState(params=params, pt=pt, ct=ct, decrypted=dec)
    return GoldenRun(params=params, scheme_seed=scheme_seed, input_seed=input_seed,
                     values=values, sk=sk, pk=pk, state=state,
                     centered_coeffs=cent, out=out)


def _artifact_pair(golden: GoldenRun, new_state: PipelineState, spec: FaultSpec):
    if spec.stage is Stage.POST_ENCODE:
        return golden.state.pt.poly, new_state.pt.poly
    if spec.stage is Stage.PRE_DECODE:
        return golden.state.decrypted.poly, new_state.decrypted.poly
    if spec.target is Target.C0:
        return golden.state.ct.c0, new_state.ct.c0
    return golden.state.ct.c1, new_state.ct.c1


def _single_coeff_out(golden: GoldenRun, new_state: PipelineState,
                      spec: FaultSpec) -> np.ndarray:
    """Faulty decode when only one decrypted coefficient can have moved.

    Valid for coefficient-basis modes and additive targets (plaintext
    and c0): the flip delta passes through decryption untouched, so the
    new coefficient is re-reduced directly and the decode is updated by
    a single matrix column. Off-lattice coefficients do not feed decode
    at all and return the golden output unchanged.
    """
    params = golden.params
    chain = params.chain
    i = spec.coeff
    old_art, new_art = _artifact_pair(golden, new_state, spec)
    if params.mode is Mode.VANILLA:
        d = new_art.coeffs[i] - old_art.coeffs[i]
        new_val = (golden.decrypted.poly.coeffs[i] + d) % chain.q
    else:
        res = [lp.coeffs[i] for lp in golden.decrypted.poly.limbs]
        k = spec.limb
        dk = new_art.limbs[k].coeffs[i] - old_art.limbs[k].coeffs[i]
        res[k] = (res[k] + dk) % chain.moduli[k].q
        new_val = 0
        for j, m in enumerate(chain.moduli):
            new_val += (res[j] * chain.crt_inv[j] % m.q) * chain.crt_qk[j]
        new_val %= chain.q
    d_cent = centered(new_val, chain.q) - golden.centered_coeffs[i]
    if d_cent == 0 or i % params.enc_ctx.gap:
        return golden.out
    t = i // params.enc_ctx.gap
    col = params.enc_ctx.B[:, t]
    scale = int_to_longdouble(d_cent) / int_to_longdouble(params.delta)
    return golden.out + (col * scale).real.astype(np.float64)


def _generic_out(golden: GoldenRun, new_state: PipelineState,
                 spec: FaultSpec) -> np.ndarray:
    """Faulty decode via ring arithmetic on the stored representations.

    Encryption and decryption are affine in each artifact, so the
    decrypted element moves by the artifact delta (times the secret for
    c1) and no re-encryption is needed.
    """
    params = golden.params
    if spec.stage is Stage.PRE_DECODE:
        dec = new_state.decrypted.poly
    elif spec.stage is Stage.POST_ENCODE:
        dec = golden.decrypted.poly + (new_state.pt.poly - golden.state.pt.poly)
    elif spec.target is Target.C0:
        dec = golden.decrypted.poly + (new_state.ct.c0 - golden.state.ct.c0)
    else:
        d = new_state.ct.c1 - golden.state.ct.c1
        dec = golden.decrypted.poly + d * golden.sk.poly
    return decode_pt(params, Plaintext(dec))


def _audit_out(golden: GoldenRun, new_state: PipelineState,
               spec: FaultSpec) -> np.ndarray:
    """Ground-truth recompute through the full pipeline, no shortcuts."""
    params = golden.params
    if spec.stage is Stage.POST_ENCODE:
        ct = encrypt_pk(params, new_state.pt, golden.pk, golden.input_seed)
        dec = decrypt(params, ct, golden.sk)
    elif spec.stage is Stage.POST_ENCRYPT:
        dec = decrypt(params, new_state.ct, golden.sk)
    else:
        dec = new_state.decrypted
    return decode_pt(params, dec)


def run_trial(golden: GoldenRun, spec: FaultSpec, tau: float = DEFAULT_TAU,
              coefficient_space: bool = False, audit: bool = False) -> TrialRecord:
    """Inject one fault into the golden run and score the decode."""
    params = golden.params
    new_state, wrapped = inject(golden.state, spec, coefficient_space)
    fast = (not coefficient_space and spec.target is not Target.C1
            and params.mode in (Mode.VANILLA, Mode.RNS_ONLY))
    if fast:
        faulty = _single_coeff_out(golden, new_state, spec)
    else:
        faulty = _generic_out(golden, new_state, spec)
    if audit:
        truth = _audit_out(golden, new_state, spec)
        l2_run = l2_error(golden.out, faulty)
        l2_tru = l2_error(golden.out, truth)
        fc_run = frac_correct(golden.out, faulty, tau)
        fc_tru = frac_correct(golden.out, truth, tau)
        if (classify(fc_run) is not classify(fc_tru)
                or abs(l2_run - l2_tru) > 1e-6 * (1.0 + l2_tru)):
            raise TrialError(f"audit mismatch for {spec.text}: "
                             f"l2 {l2_run} vs {l2_tru}")
    l2v, msev, fc, cat = score_trial(golden.out, faulty, tau)
    return TrialRecord(**params.describe(), stage=spec.stage.value,
                       target=spec.target.value, limb=spec.limb, coeff=spec.coeff,
                       bit=spec.bit, wrapped=int(wrapped),
                       scheme_seed=golden.scheme_seed, input_seed=golden.input_seed,
                       l2=l2v, mse=msev, frac_correct=fc, category=cat.value)


def select_faults(config: ExperimentConfig, params: SchemeParams) -> list[FaultSpec]:
    stages = [Stage(s) for s in config.stages]
    targets = [Target(t) for t in config.targets]
    if not stages or not targets:
        return []
    space = FaultSpace(params, stages, targets)
    if len(space) == 0:
        raise ConfigError("stages and targets combine to an empty fault set")
    return config.sampler().select(space)


def _run_pair(config: ExperimentConfig, scheme_seed: int, input_seed: int,
              params: SchemeParams | None = None,
              progress=None) -> list[TrialRecord]:
    if params is None:
        params = config.to_params()
    specs = select_faults(config, params)
    vector = None
    if config.input_file:
        vector = load_input_vector(config.input_file, params.slots)
    golden = build_golden(params, scheme_seed, input_seed,
                          config.input_lo, config.input_hi, vector)
    records = [golden.golden_record(config.tau)]
    for idx, spec in enumerate(specs):
        audit = idx % 1000 == 0
        records.append(run_trial(golden, spec, config.tau, audit=audit))
        if progress is not None and (idx + 1) % 500 == 0:
            progress(f"seeds ({scheme_seed},{input_seed}): {idx + 1}/{len(specs)} trials")
    if progress is not None:
        progress(f"seeds ({scheme_seed},{input_seed}): done, {len(records)} records")
    return records


def _run_pair_args(args) -> list[TrialRecord]:
    return _run_pair(*args)


def run_experiment(config: ExperimentConfig, workers: int = 1,
                   progress=None) -> list[TrialRecord]:
    """Run every seed pair of a campaign and return all records in order."""
    pairs = [(s, i) for s in config.scheme_seeds for i in config.input_seeds]
    if not pairs:
        raise ConfigError("scheme_seeds and input_seeds must be non-empty")
    records: list[TrialRecord] = []
    if workers <= 1:
        params = config.to_params()
        for s, i in pairs:
            records.extend(_run_pair(config, s, i, params, progress))
    else:
        jobs = [(config, s, i) for s, i in pairs]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_run_pair_args, jobs):
                records.extend(chunk)
    return records


def write_csv(records, path: str):
    """Write records with a fixed header; float fields keep full precision."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for rec in records:
            writer.writerow(rec.to_row())


def read_csv(path: str) -> list[TrialRecord]:
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise ConfigError(f"{path}: unexpected header {header}")
        return [TrialRecord.from_row(row) for row in reader]


_GROUP_FIELDS = ("mode", "N", "q0_bits", "L", "delta_log2", "slots",
                 "stage", "target")


def summarize(records) -> list[dict]:
    """Aggregate records by scheme coordinates, stage and target.

    Each group reports trial counts, category fractions, l2 extremes
    and the first bit position whose trials are not all robust (None
    when every bit is robust or the group is golden rows).
    """
    groups: dict[tuple, list[TrialRecord]] = {}
    for rec in records:
        key = tuple(getattr(rec, f) for f in _GROUP_FIELDS)
        groups.setdefault(key, []).append(rec)
    out = []
    for key in sorted(groups, key=lambda k: tuple(str(v) for v in k)):
        recs = groups[key]
        total = len(recs)
        cats = {"robust": 0, "app_dependent": 0, "catastrophic": 0}
        for rec in recs:
            cats[rec.category] += 1
        l2s = sorted(rec.l2 for rec in recs)
        onset = None
        if key[_GROUP_FIELDS.index("stage")] != "golden":
            bad_bits = [rec.bit for rec in recs if rec.category != "robust"]
            onset = min(bad_bits) if bad_bits else None
        entry = dict(zip(_GROUP_FIELDS, key))
        entry.update({
            "trials": total,
            "frac_robust": cats["robust"] / total,
            "frac_app_dependent": cats["app_dependent"] / total,
            "frac_catastrophic": cats["catastrophic"] / total,
            "l2_min": l2s[0],
            "l2_median": l2s[total // 2],
            "l2_max": l2s[-1],
            "onset_bit": onset,
        })
        out.append(entry)
    return out


def format_summary(groups) -> str:
    lines = []
    for g in groups:
        head = " ".join(f"{f}={g[f]}" for f in _GROUP_FIELDS)
        lines.append(head)
        lines.append(f"  trials={g['trials']}"
                     f" robust={g['frac_robust']:.4f}"
                     f" app_dependent={g['frac_app_dependent']:.4f}"
                     f" catastrophic={g['frac_catastrophic']:.4f}")
        onset = g["onset_bit"]
        lines.append(f"  l2 min={g['l2_min']:.6g}"
                     f" median={g['l2_median']:.6g}"
                     f" max={g['l2_max']:.6g}"
                     f" first_non_robust_bit={'-' if onset is None else onset}")
    return "\n".join(lines)
