"""Modified and linearized energies against the norms on a random ensemble."""

import sys

from _common import run_scenario

if __name__ == "__main__":
    sys.exit(run_scenario("energy-equivalence", __doc__))
