"""`pxp-client`: a thin command-line client for a running server."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx


def _request(server: str, method: str, path: str, **kwargs) -> httpx.Response:
    resp = httpx.request(method, server.rstrip("/") + path, timeout=30.0, **kwargs)
    if resp.status_code >= 400:
        try:
            err = resp.json()["error"]
            click.echo(f"error [{err['code']}]: {err['message']}", err=True)
        except (ValueError, KeyError):
            click.echo(f"error: HTTP {resp.status_code}", err=True)
        sys.exit(1)
    return resp


def _emit(doc) -> None:
    click.echo(json.dumps(doc, indent=2, sort_keys=True))


@click.group()
@click.option("--server", envvar="PXP_SERVER", default="http://127.0.0.1:8000",
              show_default=True, help="Base URL of the running server.")
@click.pass_context
def main(ctx, server):
    """Talk to a running exploration server."""
    ctx.obj = server


@main.command()
@click.pass_obj
def spec(server):
    """Print the active parameter spec."""
    _emit(_request(server, "GET", "/api/spec").json())


@main.command()
@click.argument("agent")
@click.option("--count", default=1, show_default=True, type=click.IntRange(1, 256))
@click.pass_obj
def play(server, agent, count):
    """Request a batch of proposals from AGENT."""
    resp = _request(server, "POST", f"/api/agents/{agent}/play", json={"count": count})
    _emit(resp.json())


@main.command()
@click.argument("draw_id")
@click.argument("score", type=float)
@click.pass_obj
def feedback(server, draw_id, score):
    """Score a drawing and update the active agent."""
    _request(server, "POST", "/api/feedback", json={"draw_id": draw_id, "score": score})
    click.echo("ok")


@main.command("time-warp")
@click.argument("agent")
@click.argument("steps", type=int)
@click.pass_obj
def time_warp(server, agent, steps):
    """Shift AGENT's exploration radii by STEPS."""
    _request(server, "POST", f"/api/agents/{agent}/time_warp", json={"steps": steps})
    click.echo("ok")


@main.command()
@click.argument("agent")
@click.pass_obj
def reset(server, agent):
    """Replace AGENT with a fresh instance."""
    _request(server, "POST", f"/api/agents/{agent}/reset")
    click.echo("ok")


@main.command()
@click.option("--params", required=True, help="Parameter vector as a JSON object.")
@click.option("--score", type=float, default=None)
@click.option("--image", "image_path", type=click.Path(exists=True), default=None,
              help="PNG file to attach.")
@click.pass_obj
def save(server, params, score, image_path):
    """Save a manually chosen drawing."""
    try:
        params_doc = json.loads(params)
    except json.JSONDecodeError as exc:
        raise click.BadParameter(f"--params is not valid JSON: {exc}")
    body = {"params": params_doc, "score": score}
    if image_path:
        import base64

        body["image_base64"] = base64.b64encode(Path(image_path).read_bytes()).decode()
    resp = _request(server, "POST", "/api/drawings", json=body)
    _emit(resp.json())


@main.command()
@click.option("--score-min", type=float, default=None)
@click.option("--score-max", type=float, default=None)
@click.option("--agent", default=None)
@click.option("--unrated-only", is_flag=True)
@click.option("--sort", type=click.Choice(["created_at", "score"]), default="created_at")
@click.option("--order", type=click.Choice(["asc", "desc"]), default="desc")
@click.option("--limit", type=int, default=None)
@click.option("--offset", type=int, default=0)
@click.pass_obj
def gallery(server, score_min, score_max, agent, unrated_only, sort, order, limit, offset):
    """List stored drawings."""
    params = {"sort": sort, "order": order, "offset": offset}
    if score_min is not None:
        params["score_min"] = score_min
    if score_max is not None:
        params["score_max"] = score_max
    if agent is not None:
        params["agent"] = agent
    if unrated_only:
        params["unrated_only"] = "true"
    if limit is not None:
        params["limit"] = limit
    _emit(_request(server, "GET", "/api/gallery", params=params).json())


@main.command()
@click.argument("draw_id")
@click.pass_obj
def delete(server, draw_id):
    """Delete a drawing (and its image, if any)."""
    _request(server, "DELETE", f"/api/drawings/{draw_id}")
    click.echo("ok")


if __name__ == "__main__":
    main()
