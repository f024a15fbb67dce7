import argparse
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List

import yaml
from pydantic import ValidationError

from app.config import Config
from app.errors import ConfigError
from app.experiments.scenarios import ScenarioFile, policy_violations
from app.models.core.network import NetworkSchema, semantic_violations


@dataclass
class ValidationReport:
    path: str
    violations: List[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def as_dict(self) -> Dict[str, Any]:
        return {"path": self.path, "valid": self.valid, "violations": list(self.violations)}


def _schema_errors(prefix: str, error: ValidationError) -> List[str]:
    return [f"{prefix}{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in error.errors()]


def _network_violations(raw: Any) -> List[str]:
    if not isinstance(raw, dict):
        return ["network: expected a mapping"]
    try:
        schema = NetworkSchema.model_validate(raw)
    except ValidationError as e:
        return _schema_errors("network.", e)
    return [f"network: {v}" for v in semantic_violations(
        schema.n_lots, schema.drive_time, schema.walk_time, schema.wait_time, schema.initial_probs)]


def validate_config(path: str) -> ValidationReport:
    """Check a network or scenario file and list every violation found.

    A file whose only top-level keys are the network fields is checked as a
    bare network definition.

    Raises:
        ConfigError: if the file cannot be read or is not YAML.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}")
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse config file {path}: {e}")

    report = ValidationReport(path)
    if not isinstance(data, dict):
        report.violations.append("top level: expected a mapping")
        return report

    if "network" not in data and "n_lots" in data:
        report.violations.extend(_network_violations(data))
        return report

    try:
        scenario = ScenarioFile.model_validate(data)
    except ValidationError as e:
        report.violations.extend(_schema_errors("", e))
        if isinstance(data.get("network"), dict):
            report.violations.extend(_network_violations(data["network"]))
        return report

    site = scenario.traces.kind == "site"
    if scenario.network is None and not site:
        report.violations.append("network: required unless traces.kind is 'site'")
    elif scenario.network is not None:
        report.violations.extend(_network_violations(scenario.network))
    report.violations.extend(policy_violations(scenario.policies))
    for r in scenario.observation.adoptions:
        if not 0.0 < r <= 1.0:
            report.violations.append(f"observation.adoptions: {r} lies outside (0, 1]")
    lam = scenario.observation.lambda_per_hour
    for value in (lam if isinstance(lam, list) else [lam]):
        if not value > 0:
            report.violations.append(f"observation.lambda_per_hour: must be > 0, got {value}")
    if any(d < 0 for d in scenario.departures):
        report.violations.append("departures: negative departure minutes")
    if scenario.traces.kind not in ("constant", "csv", "site"):
        report.violations.append(f"traces.kind: unknown kind '{scenario.traces.kind}'")
    return report


def main(argv=None):
    parser = argparse.ArgumentParser(description="park-sim config tool")
    parser.add_argument("path", nargs="?", help="Network or scenario file to validate")
    parser.add_argument("--show", action="store_true", help="Show current runtime configuration")
    args = parser.parse_args(argv)

    if args.show:
        # Print config as YAML
        print(yaml.safe_dump(Config.as_dict(), sort_keys=True))

    if args.path:
        try:
            report = validate_config(args.path)
        except ConfigError as e:
            print(f"error: {e}", file=sys.stderr)
            return 2
        if report.valid:
            print(f"{args.path}: OK")
            return 0
        print(f"{args.path}: {len(report.violations)} violation(s)")
        for violation in report.violations:
            print(f"  - {violation}")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
