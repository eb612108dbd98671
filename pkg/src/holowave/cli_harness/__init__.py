"""Command-line front end: run a scenario, write result.json and artifacts.

    holowave <scenario> [--config PATH] [--out DIR] [--seed N]

Exit status is 0 iff every criterion of the scenario passes, 1 if some fail
and 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from ..dynamics import ConfigError
from .config import DEFAULT_THRESHOLDS, SCENARIOS, RunConfig, load_config
from .presets import PRESETS, preset_state, random_diff_state
from .scenarios import RUNNERS, Check

__all__ = [
    "ConfigError",
    "RunConfig",
    "ScenarioResult",
    "Check",
    "SCENARIOS",
    "PRESETS",
    "DEFAULT_THRESHOLDS",
    "load_config",
    "preset_state",
    "random_diff_state",
    "run",
    "main",
]

log = logging.getLogger("holowave")


def _plain(x):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    if isinstance(x, complex):
        return [_plain(x.real), _plain(x.imag)]
    return x


@dataclass
class ScenarioResult:
    scenario: str
    criteria: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    artifacts: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.criteria.values())

    @property
    def failures(self) -> dict:
        return {k: c for k, c in self.criteria.items() if not c["passed"]}

    def to_dict(self) -> dict:
        return _plain({"scenario": self.scenario, "passed": self.passed, "criteria": self.criteria,
                       "metrics": self.metrics, "artifacts": self.artifacts})

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def run(config: RunConfig) -> ScenarioResult:
    """Run one scenario and write its report under ``config.output_dir``."""
    config.validate()
    out = Path(config.output_dir or Path("holowave-runs") / config.scenario)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"output_dir: cannot create {out}: {exc}") from exc
    log.info("running %s into %s", config.scenario, out)
    checks, metrics, artifacts = RUNNERS[config.scenario](config, out)
    crit = {}
    for c in checks:
        if c.name in crit:
            raise RuntimeError(f"duplicate criterion {c.name}")
        crit[c.name] = c.to_dict()
    rel = sorted(str(Path(a).relative_to(out)) for a in artifacts)
    result = ScenarioResult(config.scenario, crit, metrics, ["result.json"] + rel)
    (out / "result.json").write_text(result.to_json())
    (out / "config.json").write_text(json.dumps(_plain(dataclasses.asdict(config)), indent=2, sort_keys=True) + "\n")
    return result


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="holowave", description="Run a verification scenario or simulation.")
    ap.add_argument("scenario", nargs="?", choices=SCENARIOS, help="scenario to run")
    ap.add_argument("--scenario", dest="scenario_flag", choices=SCENARIOS,
                    help="scenario name (overrides the config file)")
    ap.add_argument("--config", type=Path, help="JSON run configuration")
    ap.add_argument("--out", type=Path, help="output directory")
    ap.add_argument("--seed", type=int, help="seed for random ensembles")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        doc = {}
        if args.config is not None:
            doc = load_config(args.config).to_dict()
        scenario = args.scenario_flag or args.scenario or doc.get("scenario")
        if scenario is None:
            raise ConfigError("scenario: no scenario given")
        doc["scenario"] = scenario
        if args.out is not None:
            doc["output_dir"] = str(args.out)
        if args.seed is not None:
            doc["seed"] = args.seed
        result = run(RunConfig.from_dict(doc))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    for name, c in result.criteria.items():
        status = "PASS" if c["passed"] else "FAIL"
        extra = "" if c["passed"] else f" (observed {c['observed']}, threshold {c['threshold']})"
        print(f"{status} {result.scenario}:{name}{extra}")
    return 0 if result.passed else 1
