"""Command line front end.

Exit codes: 0 on success, 1 when the domain says no (site fails a
criterion, a campaign loses jobs), 2 for unusable input.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .runtime import run_scenario
from .scenario import Scenario, ScenarioError
from .scheduler.rates import estimate_output_rate
from .survey import ChannelError, SitingRules, evaluate_site, load_channel_dir


@click.group()
def main():
    """Operational tooling for the co-located quantum device."""


@main.group()
def survey():
    """Site survey checks."""


@survey.command("validate")
@click.option("--dir", "directory", required=True,
              type=click.Path(exists=True, file_okay=False),
              help="Directory of channel CSV recordings.")
@click.option("--siting", "siting_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON file with the physical siting facts.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="Write the full report as JSON.")
def survey_validate(directory, siting_path, out_path):
    """Evaluate every acceptance criterion over a directory of recordings."""
    try:
        siting = SitingRules.from_dict(json.loads(Path(siting_path).read_text()))
        channels = load_channel_dir(directory)
        report = evaluate_site(channels, siting)
    except (ChannelError, ValueError, KeyError, json.JSONDecodeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    for r in report.criteria + report.siting:
        verdict = "PASS" if r.passed else "FAIL"
        click.echo(f"{verdict}  {r.name}: {r.detail}")
    for gap in report.missing:
        click.echo(f"FAIL  missing channel: {gap}")
    click.echo(f"overall: {'PASS' if report.overall_pass else 'FAIL'}")
    if out_path:
        Path(out_path).write_text(report.to_json() + "\n")
    sys.exit(0 if report.overall_pass else 1)


@main.command("run")
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Scenario JSON document.")
@click.option("--seed", type=int, default=None, help="Override the scenario seed.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
              help="Directory for events.jsonl, metrics.json and friends.")
def run(config_path, seed, out_dir):
    """Run one campaign scenario end to end."""
    try:
        scenario = Scenario.load(config_path)
    except (ScenarioError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    if seed is not None:
        scenario.seed = seed
    result = run_scenario(scenario, out_dir=out_dir)
    for line in result.summary_lines():
        click.echo(line)
    if out_dir:
        click.echo(f"artifacts in {out_dir}")
    sys.exit(1 if result.metrics.jobs_failed > 0 else 0)


@main.command("rate")
@click.argument("n_qubits", type=int)
@click.argument("reset_us", type=float)
@click.argument("bits_per_bit", type=float)
def rate(n_qubits, reset_us, bits_per_bit):
    """Sustained output bandwidth for N_QUBITS, RESET_US, BITS_PER_BIT."""
    try:
        value = estimate_output_rate(n_qubits, reset_us * 1e-6, bits_per_bit)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    click.echo(f"{value:.0f} bit/s")


if __name__ == "__main__":
    main()
