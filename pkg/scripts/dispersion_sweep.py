"""Measure single-mode frequencies over the acceptance parameter grid."""

import sys

from _common import run_scenario

if __name__ == "__main__":
    sys.exit(run_scenario("dispersion", __doc__))
