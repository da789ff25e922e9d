"""CLI entry point for simulated-feedback runs (`pxp-sim`)."""

from __future__ import annotations

import json
import sys

import click

from .agents import AGENT_NAMES
from .sim import load_fixture, report_emit, run


@click.command()
@click.option("--agent", "agent_name", required=True, type=click.Choice(AGENT_NAMES))
@click.option("--fixture", "fixture_path", required=True, type=click.Path(exists=True))
@click.option("--iterations", required=True, type=click.IntRange(min=1))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option(
    "--negative-feedback",
    is_flag=True,
    help="Feed zero scores back to the agent instead of leaving them unrated.",
)
@click.option(
    "--agent-config",
    default="{}",
    show_default=True,
    help="JSON object with agent configuration overrides.",
)
def main(agent_name, fixture_path, iterations, seed, out_dir, negative_feedback, agent_config):
    """Run one agent against a scorer fixture and write a report."""
    try:
        config = json.loads(agent_config)
    except json.JSONDecodeError as exc:
        raise click.BadParameter(f"--agent-config is not valid JSON: {exc}")
    fixture = load_fixture(fixture_path)
    report, _ = run(
        agent_name,
        fixture,
        iterations=iterations,
        seed=seed,
        negative_feedback=negative_feedback,
        agent_config=config,
    )
    report_emit(report, out_dir)
    click.echo(
        f"{agent_name} seed={seed}: {report.peaks_discovered} peak(s) discovered "
        f"in {iterations} iterations -> {out_dir}"
    )


if __name__ == "__main__":
    sys.exit(main())
