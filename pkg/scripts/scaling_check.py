"""RK4 self-convergence and the scaling-symmetry two-path test."""

import sys

from _common import run_scenario

if __name__ == "__main__":
    sys.exit(run_scenario("integrator-order", __doc__))
