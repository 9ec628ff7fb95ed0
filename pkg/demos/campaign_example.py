"""A small end-to-end campaign: config in, CSV out, summary table.

The same campaign can be run from the shell:

    faultlab run campaign.cfg --out results.csv
    faultlab summarize results.csv
"""

import os
import tempfile

from faultlab import (format_summary, parse_config, read_csv, run_experiment,
                      summarize, write_csv)

CONFIG = """
# two-limb residue pipeline, every c0/c1 flip, two input vectors
mode = rns_only
N = 16
q0_bits = 60
num_limbs = 2
delta_log2 = 40
slots = 4
stages = post_encrypt
targets = c0, c1
sampling = strided
stride = 16
scheme_seeds = 0
input_seeds = 0, 1
"""


def main():
    config = parse_config(CONFIG)
    records = run_experiment(config)
    print("ran %d trials (%d golden baselines included)"
          % (len(records), sum(r.stage == "golden" for r in records)))

    out = os.path.join(tempfile.mkdtemp(prefix="faultlab_"), "results.csv")
    write_csv(records, out)
    print("wrote", out)

    rows = summarize(read_csv(out))
    print()
    print(format_summary(rows))


if __name__ == "__main__":
    main()
