#!/usr/bin/env python3
"""End-to-end run on the default parameter set.

Writes the default config, extracts both kernel flavors, propagates the
optimal hierarchy to 30 steps, and compares the two kernel sets.  All
outputs land in --out (default ./out_default).
"""

import argparse
import os
import sys

from ifkernels.cli import cli_main
from ifkernels.config import default_config_text


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out_default")
    args = parser.parse_args()

    os.makedirs(args.out, exist_ok=True)
    cfg = os.path.join(args.out, "default.cfg")
    with open(cfg, "w", encoding="utf-8") as fh:
        fh.write(default_config_text())

    smatpi_dir = os.path.join(args.out, "smatpi_sym_env")
    ttm_dir = os.path.join(args.out, "ttm_sym_env")
    steps = [
        ["extract", "--config", cfg, "--out", smatpi_dir],
        ["extract", "--config", cfg, "--out", ttm_dir, "--flavor", "ttm"],
        ["propagate", "--config", cfg, "--kernels", os.path.join(smatpi_dir, "kernels.txt"),
         "--out", smatpi_dir],
        ["compare", "--kernels-a", os.path.join(smatpi_dir, "kernels.txt"),
         "--kernels-b", os.path.join(ttm_dir, "kernels.txt"),
         "--out", os.path.join(args.out, "comparison")],
        ["dyck", "--semilength", "8", "--out", os.path.join(args.out, "dyck")],
    ]
    for argv in steps:
        code = cli_main(argv)
        if code != 0:
            print(f"step {argv[0]} failed with exit code {code}", file=sys.stderr)
            return code
    print(f"outputs under {args.out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
