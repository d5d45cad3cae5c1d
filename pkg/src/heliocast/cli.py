"""Command-line client for the forecasting service.

Each verb posts to the corresponding service endpoint. By default the
service runs in-process (no network); point ``--server`` at a running
instance to drive a remote one.
"""

from __future__ import annotations

import asyncio
import json

import click
import httpx

from heliocast.service.app import app as service_app


async def _post_in_process(endpoint: str, payload: dict) -> httpx.Response:
    transport = httpx.ASGITransport(app=service_app)
    async with httpx.AsyncClient(
        transport=transport, base_url="http://heliocast.local", timeout=None
    ) as client:
        return await client.post(endpoint, json=payload)


def _post(server: str | None, endpoint: str, payload: dict) -> dict:
    if server:
        with httpx.Client(base_url=server, timeout=600.0) as client:
            response = client.post(endpoint, json=payload)
    else:
        response = asyncio.run(_post_in_process(endpoint, payload))
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise click.ClickException(f"{endpoint}: {detail}")
    return response.json()


def _emit(result: dict) -> None:
    click.echo(json.dumps(result, indent=2, sort_keys=True))


server_option = click.option("--server", default=None, help="Base URL of a running service; default runs in-process.")
config_option = click.option("--config", required=True, type=click.Path(exists=True), help="Site/plant/pipeline config JSON.")
out_dir_option = click.option("--out-dir", required=True, type=click.Path(), help="Directory for outputs.")


@click.group()
def main():
    """Solar irradiance and PV power forecasting toolkit."""


@main.command()
@click.option("--weather", "weather_csv", required=True, type=click.Path(exists=True))
@click.option("--nwp", "nwp_csv", required=True, type=click.Path(exists=True))
@click.option("--production", "production_csv", required=True, type=click.Path(exists=True))
@config_option
@out_dir_option
@server_option
def ingest(weather_csv, nwp_csv, production_csv, config, out_dir, server):
    """Parse, clean and gap-fill the measurement files into a dataset."""
    _emit(
        _post(
            server,
            "/ingest",
            {
                "weather_csv": weather_csv,
                "nwp_csv": nwp_csv,
                "production_csv": production_csv,
                "config": config,
                "out_dir": out_dir,
            },
        )
    )


@main.command()
@click.option("--dataset", "dataset_csv", required=True, type=click.Path(exists=True))
@config_option
@click.option("--as-of", required=True, help="Retrain instant (ISO-8601, local standard time).")
@click.option("--window-days", default=None, type=int, help="Override the rolling window length.")
@click.option("--seed", default=None, type=int)
@out_dir_option
@server_option
def retrain(dataset_csv, config, as_of, window_days, seed, out_dir, server):
    """Fit the model family on the trailing window and persist a version."""
    _emit(
        _post(
            server,
            "/retrain",
            {
                "dataset_csv": dataset_csv,
                "config": config,
                "as_of": as_of,
                "window_days": window_days,
                "seed": seed,
                "out_dir": out_dir,
            },
        )
    )


@main.command()
@click.option("--model-file", required=True, type=click.Path(exists=True))
@click.option("--nwp", "nwp_csv", required=True, type=click.Path(exists=True))
@config_option
@click.option("--as-of", "issue_time", required=True, help="Issue time (ISO-8601).")
@click.option("--horizon", "horizon_hours", default=24, type=int, help="Horizon in hours (max 168).")
@click.option("--resolution", default="15min", type=click.Choice(["15min", "hourly"]))
@out_dir_option
@server_option
def forecast(model_file, nwp_csv, config, issue_time, horizon_hours, resolution, out_dir, server):
    """Issue an irradiance and power forecast from the given instant."""
    _emit(
        _post(
            server,
            "/forecast",
            {
                "model_file": model_file,
                "nwp_csv": nwp_csv,
                "config": config,
                "issue_time": issue_time,
                "horizon_hours": horizon_hours,
                "resolution": resolution,
                "out_dir": out_dir,
            },
        )
    )


@main.command()
@click.option("--dataset", "dataset_csv", required=True, type=click.Path(exists=True))
@click.option("--model-file", required=True, type=click.Path(exists=True))
@config_option
@click.option("--nwp", "nwp_csv", default=None, type=click.Path(exists=True), help="Historical NWP over the gaps.")
@out_dir_option
@server_option
def backcast(dataset_csv, model_file, config, nwp_csv, out_dir, server):
    """Reconstruct irradiance gaps by forecasting over them."""
    _emit(
        _post(
            server,
            "/backcast",
            {
                "dataset_csv": dataset_csv,
                "model_file": model_file,
                "config": config,
                "nwp_csv": nwp_csv,
                "out_dir": out_dir,
            },
        )
    )


@main.command()
@click.option("--forecast-csv", required=True, type=click.Path(exists=True))
@click.option("--dataset", "dataset_csv", required=True, type=click.Path(exists=True))
@out_dir_option
@server_option
def evaluate(forecast_csv, dataset_csv, out_dir, server):
    """Score a forecast against recorded irradiance; writes report files."""
    _emit(
        _post(
            server,
            "/evaluate",
            {"forecast_csv": forecast_csv, "dataset_csv": dataset_csv, "out_dir": out_dir},
        )
    )


@main.command()
@click.option("--model-file", required=True, type=click.Path(exists=True))
@click.option("--dataset", "dataset_csv", required=True, type=click.Path(exists=True))
@click.option("--model", default="ann", type=click.Choice(["ann", "svm", "cart", "ensemble"]))
@click.option("--samples", "n_samples", default=10_000, type=int)
@click.option("--seed", default=0, type=int)
@out_dir_option
@server_option
def sensitivity(model_file, dataset_csv, model, n_samples, seed, out_dir, server):
    """First-order Sobol indices of a trained model over the data's ranges."""
    _emit(
        _post(
            server,
            "/sensitivity",
            {
                "model_file": model_file,
                "dataset_csv": dataset_csv,
                "model": model,
                "n_samples": n_samples,
                "seed": seed,
                "out_dir": out_dir,
            },
        )
    )


@main.command()
@click.option("--dataset", "dataset_csv", required=True, type=click.Path(exists=True))
@out_dir_option
@server_option
def correlate(dataset_csv, out_dir, server):
    """Correlation of each solar variable with plant generation."""
    _emit(_post(server, "/correlate", {"dataset_csv": dataset_csv, "out_dir": out_dir}))


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
def serve(host, port):
    """Run the forecasting service."""
    import uvicorn

    uvicorn.run("heliocast.service.app:app", host=host, port=port)


@main.command("init-config")
@click.option("--out", required=True, type=click.Path())
def init_config(out):
    """Write a starter config document with the default site and plant."""
    from heliocast.pipeline.config import default_config, write_config

    write_config(out, default_config())
    click.echo(f"wrote {out}")


@main.command()
@click.option("--start", required=True, help="ISO date, inclusive.")
@click.option("--end", required=True, help="ISO date, exclusive.")
@config_option
@click.option("--seed", default=0, type=int)
@out_dir_option
def synth(start, end, config, seed, out_dir):
    """Generate synthetic weather/production/NWP fixture CSVs."""
    from datetime import datetime

    from heliocast.pipeline.config import load_config
    from heliocast.synth import generate_csv_files

    paths = generate_csv_files(
        load_config(config),
        datetime.fromisoformat(start),
        datetime.fromisoformat(end),
        out_dir,
        seed=seed,
    )
    click.echo(json.dumps({k: str(v) for k, v in paths.items()}, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
