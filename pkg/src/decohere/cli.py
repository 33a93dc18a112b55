"""Command-line scenario runner.

    decohere run <scenario> --config <path> [--seed N] [--out DIR]
    decohere verify <scenario> [--seed N]

Configs are JSON, validated against the schemas shipped in
decohere/schemas (unknown keys are rejected; defaults are filled in).
Each run writes its CSV tables, a report.json, and a manifest recording
the schema version, the config hash, the seed and the package version.
Files are written atomically (temp file + rename).

Exit codes: 0 success, 2 configuration error, 3 numerical-tolerance
failure (including positivity-admissibility rejections).
"""

from __future__ import annotations

import csv
import hashlib
import importlib.resources
import json
import os
import sys
import tempfile
import time
from typing import Any

import click
import jsonschema

from . import __version__
from .bloch import AdmissibilityError
from .scenarios import (
    SCENARIOS,
    SCHEMA_VERSIONS,
    VERIFY_CONFIGS,
    ConfigError,
    ScenarioResult,
    ToleranceError,
    verify_scenario,
)

EXIT_CONFIG = 2
EXIT_TOLERANCE = 3


def load_schema(scenario: str) -> dict[str, Any]:
    ref = importlib.resources.files("decohere.schemas").joinpath(f"{scenario}.json")
    return json.loads(ref.read_text())


def apply_defaults(scenario: str, config: dict[str, Any]) -> dict[str, Any]:
    """Validate against the shipped schema and fill in defaults."""
    schema = load_schema(scenario)
    try:
        jsonschema.validate(config, schema)
    except jsonschema.ValidationError as exc:
        raise ConfigError(_validation_message(exc)) from exc
    merged = dict(config)
    for key, prop in schema["properties"].items():
        if key not in merged and "default" in prop:
            merged[key] = prop["default"]
    return merged


def _validation_message(exc: jsonschema.ValidationError) -> str:
    if exc.validator == "required":
        return str(exc.message)  # names the missing parameter
    if exc.validator == "additionalProperties":
        return f"unknown configuration keys: {exc.message}"
    path = ".".join(str(p) for p in exc.path) or "<root>"
    return f"invalid value for {path}: {exc.message}"


def _atomic_write(path: str, write_fn) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            write_fn(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str, header: list[str], rows: list[list[Any]]) -> None:
    def _write(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [cell if isinstance(cell, str) else repr(float(cell)) for cell in row]
            )

    _atomic_write(path, _write)


def write_json(path: str, payload: dict[str, Any]) -> None:
    _atomic_write(path, lambda fh: json.dump(payload, fh, indent=2, sort_keys=True))


def config_hash(config: dict[str, Any]) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def run_scenario_to_dir(
    scenario: str, config: dict[str, Any], seed: int, out_dir: str
) -> ScenarioResult:
    started = time.perf_counter()
    result = SCENARIOS[scenario](config, seed)
    os.makedirs(out_dir, exist_ok=True)
    outputs = []
    for name, (header, rows) in result.tables.items():
        filename = f"{name}.csv"
        write_csv(os.path.join(out_dir, filename), header, rows)
        outputs.append(filename)
    write_json(os.path.join(out_dir, "report.json"), result.report)
    outputs.append("report.json")
    manifest = {
        "scenario": scenario,
        "schema_version": SCHEMA_VERSIONS[scenario],
        "config": config,
        "config_sha256": config_hash(config),
        "seed": seed,
        "package_version": __version__,
        "outputs": outputs,
        "elapsed_s": time.perf_counter() - started,
    }
    write_json(os.path.join(out_dir, "manifest.json"), manifest)
    return result


@click.group()
def main() -> None:
    """Decoherence scenario runner."""


@main.command("run")
@click.argument("scenario")
@click.option("--config", "config_path", required=True, type=click.Path(), help="JSON config file")
@click.option("--seed", type=int, default=None, help="override the config seed")
@click.option("--out", "out_dir", type=click.Path(), default=None, help="output directory")
def run_command(scenario: str, config_path: str, seed: int | None, out_dir: str | None) -> None:
    """Run SCENARIO with the given config, writing CSV/JSON artifacts."""
    if scenario not in SCENARIOS:
        click.echo(f"error: unknown scenario {scenario!r}; choose from "
                   f"{sorted(SCENARIOS)}", err=True)
        sys.exit(EXIT_CONFIG)
    try:
        with open(config_path) as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        config = apply_defaults(scenario, raw)
    except (OSError, json.JSONDecodeError, ConfigError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    effective_seed = seed if seed is not None else int(config.get("seed", 0))
    out_dir = out_dir or os.path.join("decohere-out", scenario)
    try:
        run_scenario_to_dir(scenario, config, effective_seed, out_dir)
    except AdmissibilityError as exc:
        click.echo(f"error: positivity admissibility: {exc}", err=True)
        sys.exit(EXIT_TOLERANCE)
    except (ToleranceError, RuntimeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_TOLERANCE)
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    click.echo(f"wrote {out_dir}/manifest.json")


@main.command("verify")
@click.argument("scenario")
@click.option("--seed", type=int, default=0)
def verify_command(scenario: str, seed: int) -> None:
    """Run SCENARIO's acceptance checks; exit 3 on any failure."""
    if scenario not in SCENARIOS:
        click.echo(f"error: unknown scenario {scenario!r}; choose from "
                   f"{sorted(SCENARIOS)}", err=True)
        sys.exit(EXIT_CONFIG)
    try:
        checks = verify_scenario(scenario, apply_defaults, seed)
    except (ToleranceError, AdmissibilityError, RuntimeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_TOLERANCE)
    failed = False
    for check in checks:
        status = "PASS" if check["passed"] else "FAIL"
        click.echo(f"[{status}] {check['check']}: {check['detail']}")
        failed = failed or not check["passed"]
    if failed:
        sys.exit(EXIT_TOLERANCE)


if __name__ == "__main__":
    main()
