"""Check every normal-form symbol against its linear system."""

import sys

from _common import run_scenario

if __name__ == "__main__":
    sys.exit(run_scenario("verify-symbols", __doc__))
