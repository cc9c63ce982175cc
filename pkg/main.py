"""
MP-OLSR Sim command-line wrapper.
Author: Alberto Barrago
License: BSD 3-Clause License - 2025

Runs the same entry point as the `mpolsr` console script, for use from a
source checkout.
"""

import sys
from mpolsr.cli import main

if __name__ == "__main__":
    sys.exit(main())
