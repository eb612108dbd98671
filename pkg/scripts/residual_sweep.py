"""Halving-amplitude ratios of the paradifferential residuals."""

import sys

from _common import run_scenario

if __name__ == "__main__":
    sys.exit(run_scenario("para-residuals", __doc__))
