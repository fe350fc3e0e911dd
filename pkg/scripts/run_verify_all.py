#!/usr/bin/env python3
"""Run the full verification suite with the shipped default configuration.

Equivalent to `padic-hua verify all --seed 42`; reports land in ./reports.
"""

import sys

from padic_hua.cli import main

if __name__ == "__main__":
    argv = sys.argv[1:] or ["--seed", "42"]
    sys.exit(main(["verify", "all", *argv]))
