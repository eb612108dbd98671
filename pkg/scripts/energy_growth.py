"""Energy growth rates along an amplitude sweep."""

import sys

from _common import run_scenario

if __name__ == "__main__":
    sys.exit(run_scenario("energy-growth", __doc__))
