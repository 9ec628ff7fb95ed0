"""Walk one vector through encode, encrypt, decrypt, decode.

Runs the same input through all four storage modes and shows that the
decoded outputs agree bit for bit when the modulus chain matches, then
prints the intermediate artifacts for the plain big-integer mode.
"""

import numpy as np

from faultlab import (SchemeParams, decrypt, encode_pt, encrypt_pk, keygen,
                      make_input, rep_to_centered)

SCHEME_SEED = 7
INPUT_SEED = 3


def run_mode(mode, num_limbs, values):
    params = SchemeParams(mode, n=16, q0_bits=60, num_limbs=num_limbs,
                          delta_log2=40, slots=4)
    sk, pk = keygen(params, SCHEME_SEED)
    pt = encode_pt(params, values)
    ct = encrypt_pk(params, pt, pk, INPUT_SEED)
    dec = decrypt(params, ct, sk)
    out = params.enc_ctx.decode(rep_to_centered(params, dec.poly), params.delta)
    return params, pt, ct, out


def main():
    values = make_input(4, INPUT_SEED, -1.0, 1.0)
    print("input slots:", np.round(values, 6))
    print()

    params, pt, ct, out = run_mode("vanilla", 1, values)
    cent = rep_to_centered(params, pt.poly)
    print("vanilla Q has %d bits" % params.big_modulus.q.bit_length())
    print("plaintext coefficients (centered):")
    print(" ", cent)
    print("used coefficients sit at stride %d; the rest stay zero"
          % ((params.n // 2) // params.slots))
    print("c0 coefficient 0 occupies %d bits"
          % ct.c0.coeffs[0].bit_length())
    print()

    outputs = {}
    for mode, limbs in (("vanilla", 1), ("rns_only", 2), ("rns_ntt", 2)):
        p, _, _, decoded = run_mode(mode, limbs, values)
        outputs[mode] = decoded
        err = np.max(np.abs(decoded - values))
        print("%-8s -> max error %.3e" % (mode, err))
    # rns_only and rns_ntt share the two-limb chain with vanilla's L=2
    # sibling, so their whole pipelines agree exactly, not just closely.
    same = np.array_equal(outputs["rns_only"], outputs["rns_ntt"])
    print()
    print("rns_only and rns_ntt decode bit-identical:", same)

    p = SchemeParams("ntt_only", n=16, q0_bits=60, delta_log2=40, slots=4)
    sk, pk = keygen(p, SCHEME_SEED)
    ct = encrypt_pk(p, encode_pt(p, values), pk, INPUT_SEED)
    dec = decrypt(p, ct, sk)
    out = p.enc_ctx.decode(rep_to_centered(p, dec.poly), p.delta)
    print("ntt_only stores evaluation-basis words; decode max error %.3e"
          % np.max(np.abs(out - values)))


if __name__ == "__main__":
    main()
