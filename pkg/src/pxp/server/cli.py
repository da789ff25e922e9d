"""`pxp-server`: start the HTTP service.

Every flag can also be supplied through an environment variable with the
PXP_ prefix (PXP_SPEC, PXP_DB, ...); explicit flags win.
"""

from __future__ import annotations

import json
import sys

import click
import uvicorn

from ..agents import AGENT_NAMES
from .app import SessionConfig, create_app


def parse_listen(listen: str) -> tuple[str, int]:
    host, sep, port = listen.rpartition(":")
    if not sep or not port.isdigit():
        raise click.BadParameter(f"expected host:port, got {listen!r}")
    return host or "127.0.0.1", int(port)


@click.command()
@click.option("--spec", "spec_path", envvar="PXP_SPEC", required=True,
              help="Path to the parameter spec JSON file.")
@click.option("--db", "db_path", envvar="PXP_DB", default="data/db.json",
              show_default=True, help="Path of the JSON document store.")
@click.option("--images", "images_dir", envvar="PXP_IMAGES", default="data/images",
              show_default=True, help="Directory for rendered PNGs.")
@click.option("--listen", envvar="PXP_LISTEN", default="127.0.0.1:8000",
              show_default=True, help="host:port to bind.")
@click.option("--agent", envvar="PXP_AGENT", default="random", show_default=True,
              type=click.Choice(AGENT_NAMES), help="Initially active agent.")
@click.option("--seed", envvar="PXP_SEED", default=0, show_default=True, type=int)
@click.option("--agent-config", envvar="PXP_AGENT_CONFIG", default="{}",
              show_default=True, help="JSON config for the active agent.")
def main(spec_path, db_path, images_dir, listen, agent, seed, agent_config):
    """Serve the exploration API over HTTP."""
    try:
        config_map = json.loads(agent_config)
    except json.JSONDecodeError as exc:
        raise click.BadParameter(f"--agent-config is not valid JSON: {exc}")
    host, port = parse_listen(listen)
    config = SessionConfig(
        spec_path=spec_path,
        db_path=db_path,
        images_dir=images_dir,
        listen=listen,
        agent=agent,
        seed=seed,
        agent_config=config_map,
    )
    try:
        app = create_app(config)
    except (FileNotFoundError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
