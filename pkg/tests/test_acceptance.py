"""End-to-end acceptance checks for the pipeline and fault harness.

Each test covers one numbered claim: transform precision, exact
algebraic fault laws, classification behavior across storage modes,
and the large-degree structural-robustness run. Every test prints a
single verdict line so a log scan shows per-claim outcomes; run with
pytest -v (or -s) to see them.
"""

import math
import time

import numpy as np

from faultlab import (EncodingContext, FaultSpace, NttTables, PrimeModulus,
                      RandomSubset, SchemeParams, Stage, Target, build_chain,
                      build_golden, centered, crt_reconstruct, decompose,
                      decrypt, derive_rng, find_ntt_prime, inject, ntt_forward,
                      ntt_inverse, predict_rns_error, rep_to_centered,
                      run_trial)
from faultlab.metrics import l2_error
from faultlab.rns import LimbChain


def _verdict(num: int, ok: bool, label: str) -> bool:
    print("[check %02d] %s %s" % (num, "PASS" if ok else "FAIL", label))
    return ok


def _schoolbook(a, b, q):
    """Negacyclic product by direct convolution, kept free of package code."""
    n = len(a)
    acc = [0] * n
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            k = i + j
            if k < n:
                acc[k] += ai * bj
            else:
                acc[k - n] -= ai * bj
    return tuple(c % q for c in acc)


def _full_decode(golden, state):
    """Decrypt and decode a pipeline state without any trial shortcuts."""
    params = golden.params
    dec = decrypt(params, state.ct, golden.sk)
    return params.enc_ctx.decode(rep_to_centered(params, dec.poly),
                                 params.delta)


def _rand_mod(rng, q):
    x = 0
    for _ in range((q.bit_length() + 62) // 63):
        x = (x << 63) | int(rng.integers(0, 2 ** 63))
    return x % q


def test_c01_roundtrip_precision_bound():
    t0 = time.perf_counter()
    worst = 0.0
    for n in (8, 16, 1024):
        ctx = EncodingContext.create(n, n // 2)
        for log_delta in (20, 40, 50):
            delta = 2 ** log_delta
            bound = n / (math.pi * delta)
            rng = derive_rng(101, "roundtrip", n, log_delta)
            for _ in range(25):
                z = rng.uniform(0.0, 256.0, n // 2)
                back = ctx.decode(ctx.encode(z, delta), delta)
                worst = max(worst, float(np.max(np.abs(back - z))) / bound)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1.0 and elapsed < 10.0
    assert _verdict(1, ok, "round-trip error within N/(pi*delta), "
                    "worst %.3f of bound, %.1fs" % (worst, elapsed))


def test_c02_ntt_product_matches_schoolbook():
    t0 = time.perf_counter()
    products_ok = roundtrips_ok = 0
    for n in (4, 8, 64, 256):
        q = find_ntt_prime(60, 2 * n)
        tab = NttTables.create(PrimeModulus.create(q, n))
        rng = derive_rng(102, "conformance", n)
        for _ in range(100):
            a = tuple(int(x) for x in rng.integers(0, q, n))
            b = tuple(int(x) for x in rng.integers(0, q, n))
            fa, fb = ntt_forward(a, tab), ntt_forward(b, tab)
            via_ntt = ntt_inverse(tuple(x * y % q for x, y in zip(fa, fb)), tab)
            products_ok += via_ntt == _schoolbook(a, b, q)
        for _ in range(250):
            vec = tuple(int(x) for x in rng.integers(0, q, n))
            roundtrips_ok += ntt_inverse(ntt_forward(vec, tab), tab) == vec
    elapsed = time.perf_counter() - t0
    ok = products_ok == 400 and roundtrips_ok == 1000 and elapsed < 10.0
    assert _verdict(2, ok, "NTT products %d/400 exact, identities %d/1000, "
                    "%.1fs" % (products_ok, roundtrips_ok, elapsed))


def test_c03_crt_roundtrip_and_flip_delta():
    t0 = time.perf_counter()
    small = LimbChain.create([PrimeModulus.create(17, 2),
                              PrimeModulus.create(13, 2)])
    exhaustive_ok = all(
        crt_reconstruct(decompose([x, 0], small), small)[0] == x
        for x in range(221))

    chain = build_chain(60, 3, 4)
    rng = derive_rng(103, "crt")
    random_ok = True
    for _ in range(250):
        vals = [_rand_mod(rng, chain.q) for _ in range(chain.n)]
        random_ok &= crt_reconstruct(decompose(vals, chain), chain) == tuple(vals)

    flips_ok = True
    bits = sorted(int(b) for b in rng.choice(60, size=16, replace=False))
    for k, mod in enumerate(chain.moduli):
        for j in bits:
            vals = [_rand_mod(rng, chain.q) for _ in range(chain.n)]
            res = [list(r) for r in decompose(vals, chain)]
            old = res[k][0]
            new = old ^ (1 << j)
            if new >= mod.q:
                new -= mod.q
            res[k][0] = new
            y = crt_reconstruct([tuple(r) for r in res], chain)[0]
            delta = centered((y - vals[0]) % chain.q, chain.q)
            flips_ok &= delta == predict_rns_error(chain, k, (new - old) % mod.q)
    elapsed = time.perf_counter() - t0
    ok = exhaustive_ok and random_ok and flips_ok and elapsed < 10.0
    assert _verdict(3, ok, "CRT exact: exhaustive %s, 1000 random %s, "
                    "flip deltas %s, %.1fs"
                    % (exhaustive_ok, random_ok, flips_ok, elapsed))


def test_c04_c0_flip_stays_localized():
    params = SchemeParams("vanilla", n=8, q0_bits=60, delta_log2=40, slots=4)
    golden = build_golden(params, 0, 0)
    q = params.big_modulus.q
    base = decrypt(params, golden.state.ct, golden.sk).poly.coeffs
    bad = 0
    for spec in FaultSpace(params, stages=[Stage.POST_ENCRYPT],
                           targets=[Target.C0]):
        state, _ = inject(golden.state, spec)
        dec = decrypt(params, state.ct, golden.sk).poly.coeffs
        diffs = [(a - b) % q for a, b in zip(dec, base)]
        moved = [i for i, d in enumerate(diffs) if d]
        step = 2 ** spec.bit % q
        if moved != [spec.coeff] or diffs[spec.coeff] not in (step, q - step):
            bad += 1
    ok = bad == 0
    assert _verdict(4, ok, "C0 flips localized to one coefficient, "
                    "+/-2^j mod Q, %d/480 violations" % bad)


def test_c05_c1_flip_spreads_as_secret_multiple():
    params = SchemeParams("vanilla", n=8, q0_bits=60, delta_log2=40, slots=4)
    golden = build_golden(params, 0, 0)
    q = params.big_modulus.q
    s_rep = golden.sk.poly.coeffs
    s_inf = max(abs(c) for c in golden.sk.ternary)
    base = decrypt(params, golden.state.ct, golden.sk).poly.coeffs
    bad = 0
    for spec in FaultSpace(params, stages=[Stage.POST_ENCRYPT],
                           targets=[Target.C1]):
        state, _ = inject(golden.state, spec)
        dec = decrypt(params, state.ct, golden.sk).poly.coeffs
        diffs = tuple((a - b) % q for a, b in zip(dec, base))
        d = (state.ct.c1.coeffs[spec.coeff]
             - golden.state.ct.c1.coeffs[spec.coeff]) % q
        fault_poly = [0] * params.n
        fault_poly[spec.coeff] = d
        expected = _schoolbook(fault_poly, s_rep, q)
        inf = max(abs(centered(c, q)) for c in diffs)
        if diffs != expected or inf > 2 ** spec.bit * s_inf:
            bad += 1
    ok = bad == 0
    assert _verdict(5, ok, "C1 flips equal fault*secret exactly, inf-norm "
                    "<= 2^j*|s|, %d/480 violations" % bad)


def test_c06_staircase_and_low_bit_resilience():
    t0 = time.perf_counter()
    params = SchemeParams("vanilla", n=4, q0_bits=60, delta_log2=50, slots=2)
    low_bad = 0
    ratio_bad = 0
    for scheme_seed in range(4):
        for input_seed in range(4):
            golden = build_golden(params, scheme_seed, input_seed, 64.0, 256.0)
            l2 = {}
            for spec in FaultSpace(params, stages=[Stage.POST_ENCRYPT],
                                   targets=[Target.C0]):
                rec = run_trial(golden, spec)
                l2[(spec.coeff, spec.bit)] = rec.l2
                if spec.bit <= 44 and rec.category != "robust":
                    low_bad += 1
            for coeff in range(4):
                for j in range(54, 58):
                    lo, hi = l2[(coeff, j)], l2[(coeff, j + 1)]
                    if lo == 0.0:
                        ratio_bad += hi != 0.0
                    elif not 1.8 <= hi / lo <= 2.2:
                        ratio_bad += 1
    elapsed = time.perf_counter() - t0
    ok = low_bad == 0 and ratio_bad == 0 and elapsed < 60.0
    assert _verdict(6, ok, "per-bit error doubles in [54,58] (%d bad ratios), "
                    "bits <=44 robust (%d violations), %.1fs"
                    % (ratio_bad, low_bad, elapsed))


def test_c07_predictor_matches_measured_l2():
    params = SchemeParams("vanilla", n=16, q0_bits=60, delta_log2=40, slots=8)
    golden = build_golden(params, 0, 0)
    gate = 64.0 * l2_error(golden.values, golden.out)
    worst = 0.0
    included = 0
    for spec in FaultSpace(params, stages=[Stage.POST_ENCRYPT],
                           targets=[Target.C0]):
        if 2.0 ** spec.bit / params.delta < gate or spec.coeff == 8:
            continue
        pred = params.predict_l2_norm(spec.coeff, spec.bit)
        rec = run_trial(golden, spec)
        worst = max(worst, abs(rec.l2 - pred) / pred)
        included += 1
    axis_zero = all(params.predict_l2_norm(8, j) == 0.0 for j in range(60))
    ok = included > 0 and worst <= 0.20 and axis_zero
    assert _verdict(7, ok, "predicted l2 within 20%% of measured on %d flips "
                    "(worst %.4f), mid-axis prediction exactly 0: %s"
                    % (included, worst, axis_zero))


def test_c08_gap_coefficients_are_immune():
    identical_bad = 0
    highbit_bad = 0
    for mode, limbs in (("vanilla", 1), ("rns_only", 2)):
        params = SchemeParams(mode, n=16, q0_bits=60, num_limbs=limbs,
                              delta_log2=20, slots=4)
        golden = build_golden(params, 0, 0)
        odd = FaultSpace(params, stages=[Stage.POST_ENCRYPT],
                         targets=[Target.C0], coeffs=range(1, 16, 2))
        for spec in odd:
            state, _ = inject(golden.state, spec)
            if not np.array_equal(_full_decode(golden, state), golden.out):
                identical_bad += 1
        evens = [c for c in range(0, 16, 2)
                 if not (mode == "vanilla" and c == 8)]
        high = FaultSpace(params, stages=[Stage.POST_ENCRYPT],
                          targets=[Target.C0], coeffs=evens, bits=(55, 57))
        for spec in high:
            if run_trial(golden, spec).category == "robust":
                highbit_bad += 1
    ok = identical_bad == 0 and highbit_bad == 0
    assert _verdict(8, ok, "odd-coefficient flips decode bit-identical "
                    "(%d bad), used-coefficient high bits non-robust (%d bad)"
                    % (identical_bad, highbit_bad))


def test_c09_rns_all_or_nothing():
    t0 = time.perf_counter()
    params = SchemeParams("rns_only", n=16, q0_bits=60, num_limbs=2,
                          delta_log2=40, slots=4)
    counts = {"c1": [0, 0], "used": [0, 0], "unused": [0, 0]}
    k = 0
    for scheme_seed in (0, 1):
        for input_seed in (0, 1):
            golden = build_golden(params, scheme_seed, input_seed)
            space = FaultSpace(params, stages=[Stage.POST_ENCRYPT],
                               targets=[Target.C0, Target.C1])
            for spec in space:
                rec = run_trial(golden, spec, audit=(k % 500 == 0))
                k += 1
                if spec.target is Target.C1:
                    key, want = "c1", "catastrophic"
                elif spec.coeff % 2 == 0:
                    key, want = "used", "catastrophic"
                else:
                    key, want = "unused", "robust"
                counts[key][0] += rec.category == want
                counts[key][1] += 1
    elapsed = time.perf_counter() - t0
    frac = {k: v[0] / v[1] for k, v in counts.items()}
    ok = (frac["c1"] == 1.0 and frac["used"] >= 0.95
          and frac["unused"] == 1.0 and elapsed < 120.0)
    assert _verdict(9, ok, "C1 catastrophic %.3f, used-C0 catastrophic %.3f, "
                    "unused-C0 robust %.3f, %.1fs"
                    % (frac["c1"], frac["used"], frac["unused"], elapsed))


def test_c10_eval_domain_flips_amplify():
    results = []
    for mode, limbs in (("ntt_only", 1), ("rns_ntt", 2)):
        params = SchemeParams(mode, n=16, q0_bits=60, num_limbs=limbs,
                              delta_log2=40, slots=8)
        golden = build_golden(params, 0, 0)
        base = l2_error(golden.values, golden.out)
        n_cat = n_amp = n_tot = 0
        for stage, target in ((Stage.POST_ENCODE, Target.PLAINTEXT),
                              (Stage.POST_ENCRYPT, Target.C0),
                              (Stage.POST_ENCRYPT, Target.C1)):
            space = FaultSpace(params, stages=[stage], targets=[target])
            for k, spec in enumerate(RandomSubset(200, 7).select(space)):
                rec = run_trial(golden, spec, audit=(k % 50 == 0))
                n_tot += 1
                n_cat += rec.category == "catastrophic"
                n_amp += rec.l2 >= 1e4 * base
        results.append((mode, n_cat / n_tot, n_amp / n_tot))
    ok = all(c >= 0.99 and a >= 0.95 for _, c, a in results)
    assert _verdict(10, ok, "eval-domain flips: " + ", ".join(
        "%s catastrophic %.3f amp>=1e4 %.3f" % r for r in results))


def test_c11_larger_delta_extends_robustness():
    shares = {}
    per_coeff = {}
    for log_delta in (20, 40, 50):
        params = SchemeParams("vanilla", n=128, q0_bits=60,
                              delta_log2=log_delta, slots=64)
        golden = build_golden(params, 0, 0, 1.0, 2.0)
        robust_bits = np.zeros(128, dtype=int)
        total = 0
        for spec in FaultSpace(params, stages=[Stage.POST_ENCRYPT],
                               targets=[Target.C0]):
            rec = run_trial(golden, spec)
            total += 1
            robust_bits[spec.coeff] += rec.category == "robust"
        shares[log_delta] = robust_bits.sum() / total
        per_coeff[log_delta] = robust_bits
    mask = np.arange(128) != 64
    d1 = (per_coeff[40] - per_coeff[20])[mask]
    d2 = (per_coeff[50] - per_coeff[40])[mask]
    increasing = shares[20] < shares[40] < shares[50]
    shift_ok = (np.all(np.abs(d1 - 20) <= 4) and np.all(np.abs(d2 - 10) <= 4))
    ok = increasing and shift_ok
    assert _verdict(11, ok, "robust share %.3f -> %.3f -> %.3f, per-coeff "
                    "shifts 20: [%d,%d], 10: [%d,%d]"
                    % (shares[20], shares[40], shares[50],
                       d1.min(), d1.max(), d2.min(), d2.max()))


def test_c12_larger_inputs_are_more_robust():
    stats = {}
    for lo, hi in ((2.0 ** 9, 2.0 ** 10), (2.0 ** 29, 2.0 ** 30)):
        params = SchemeParams("vanilla", n=128, q0_bits=60, delta_log2=20,
                              slots=64)
        golden = build_golden(params, 0, 0, lo, hi)
        cats = {"robust": 0, "app_dependent": 0, "catastrophic": 0}
        for spec in FaultSpace(params, stages=[Stage.POST_ENCRYPT],
                               targets=[Target.C0]):
            cats[run_trial(golden, spec).category] += 1
        stats[lo] = cats
    small, large = stats[2.0 ** 9], stats[2.0 ** 29]
    total = sum(small.values()) + sum(large.values())
    pooled = (small["robust"] + small["catastrophic"]
              + large["robust"] + large["catastrophic"]) / total
    ok = (large["robust"] > small["robust"]
          and large["catastrophic"] < small["catastrophic"]
          and pooled > 0.90)
    assert _verdict(12, ok, "robust %d -> %d, catastrophic %d -> %d, "
                    "bimodal share %.3f"
                    % (small["robust"], large["robust"],
                       small["catastrophic"], large["catastrophic"], pooled))


def test_c13_large_degree_gap_accounting():
    t0 = time.perf_counter()
    params = SchemeParams("rns_only", n=2 ** 15, q0_bits=60, num_limbs=3,
                          delta_log2=40, slots=2 ** 10)
    gap = (params.n // 2) // params.slots
    golden = build_golden(params, 0, 0)
    space = FaultSpace(params, stages=[Stage.POST_ENCRYPT],
                       targets=[Target.C0])
    bad = 0
    on_lattice = 0
    for k, spec in enumerate(RandomSubset(400, 0).select(space)):
        rec = run_trial(golden, spec, audit=(k % 100 == 0))
        if spec.coeff % gap == 0:
            on_lattice += 1
            bad += rec.category != "catastrophic"
        else:
            bad += rec.category != "robust"
    sensitive = sum(1 for c in range(params.n) if c % gap == 0)
    structural = 1.0 - sensitive / params.n
    counts_ok = sensitive == params.n // 16 == 2048 and structural == 0.9375
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and counts_ok and elapsed < 900.0
    assert _verdict(13, ok, "400 sampled flips: %d on-lattice catastrophic, "
                    "rest robust, %d violations; sensitive count %d (93.75%% "
                    "structurally robust), %.0fs"
                    % (on_lattice, bad, sensitive, elapsed))
