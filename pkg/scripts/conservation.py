"""Track energy and momentum along a random-band trajectory."""

import sys

from _common import run_scenario

if __name__ == "__main__":
    sys.exit(run_scenario("conservation", __doc__))
