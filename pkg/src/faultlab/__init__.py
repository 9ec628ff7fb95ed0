"""Client-side approximate-encryption pipeline with fault injection.

The package builds a complete encode/encrypt/decrypt/decode pipeline in
four storage modes (big-integer, residue system, evaluation basis, and
both) and measures how single stored-bit flips at chosen pipeline
stages distort the decoded output.
"""

from .errors import (CapacityError, ConfigError, FaultLabError, ParameterError,
                     StateError, TrialError)
from .faults import (Exhaustive, FaultSpace, FaultSpec, PipelineState,
                     RandomSubset, Stage, Strided, Target, enumerate_faults,
                     flip_bit, inject, injectable_limbs)
from .harness import (ExperimentConfig, GoldenRun, build_golden, format_summary,
                      load_config, make_input, parse_config, read_csv,
                      run_experiment, run_trial, select_faults, summarize,
                      write_csv)
from .metrics import (CSV_HEADER, DEFAULT_TAU, Category, TrialRecord, classify,
                      frac_correct, l2_error, mse, relative_errors, score_trial)
from .ring import (BigPoly, CompositeModulus, Domain, PrimeModulus, RingPoly,
                   centered, find_ntt_prime, find_primitive_root, is_prime_u64,
                   negacyclic_mul)
from .rns import (LimbChain, RnsPoly, build_chain, crt_reconstruct, decompose,
                  predict_rns_error)
from .scheme import (Ciphertext, Mode, Plaintext, PublicKey, SchemeParams,
                     SecretKey, decode_pt, decrypt, encode_pt, encrypt_pk,
                     encrypt_sk, keygen, rep_from_signed, rep_to_centered)
from .seeding import derive_rng
from .transforms import (EncodingContext, NttTables, int_to_longdouble,
                         ntt_forward, ntt_inverse, predict_l2_norm, to_coeff,
                         to_eval)

__version__ = "0.1.0"
