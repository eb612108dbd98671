import argparse
import sys

from holowave.cli_harness import RunConfig, run


def run_scenario(name: str, description: str, **defaults) -> int:
    ap = argparse.ArgumentParser(description=description)
    ap.add_argument("--out", default=f"holowave-runs/{name}")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n-modes", type=int, default=None)
    args = ap.parse_args()
    doc = {"scenario": name, "output_dir": args.out, "seed": args.seed, **defaults}
    if args.n_modes is not None:
        doc["grid"] = {"n_modes": args.n_modes}
    res = run(RunConfig.from_dict(doc))
    for k, c in res.criteria.items():
        print(f"{'PASS' if c['passed'] else 'FAIL'} {k}  observed={c['observed']}")
    print(f"report: {args.out}/result.json")
    return 0 if res.passed else 1


if __name__ == "__main__":
    sys.exit("import this module from the other scripts")
