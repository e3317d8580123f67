"""Command-line entry point: fuzz suites, worked examples, region figure."""

import sys
from pathlib import Path

import click

from ._version import __version__
from .errors import ConfigError, UnknownExample
from .figure import (
    build_region_dataset,
    parse_phase,
    region_csv_text,
    render_region_png,
)
from .fuzz import SUITES, SuiteConfig, report_csv_text, report_json_text, run_suites
from .worked_examples import run_worked_example


@click.group()
@click.version_option(__version__, prog_name="wvlab")
def main():
    """Weak-value numerics: relation fuzzing, worked examples, region data."""


def _parse_dims(text: str) -> tuple[int, int]:
    raw = text.strip()
    if ".." in raw:
        lo_text, hi_text = raw.split("..", 1)
        return int(lo_text), int(hi_text)
    value = int(raw)
    return value, value


@main.command()
@click.option("--suite", "suites", multiple=True, type=click.Choice(SUITES),
              help="Suite to run (repeatable); default is all suites.")
@click.option("--dims", default="2..4", show_default=True,
              help="Dimension range LO..HI (inclusive).")
@click.option("--trials", default=1000, show_default=True, type=int,
              help="Trials per suite and dimension.")
@click.option("--seed", default=42, show_default=True, type=int,
              help="Master seed; trial seeds derive from it deterministically.")
@click.option("--tol", default=1e-9, show_default=True, type=float,
              help="Inequality slack / identity residual tolerance.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="Report file; omitted means stdout.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
              default="json", show_default=True)
def fuzz(suites, dims, trials, seed, tol, out_path, fmt):
    """Run randomized relation suites; exit 0 means zero failures."""
    try:
        dim_lo, dim_hi = _parse_dims(dims)
    except ValueError:
        raise click.BadParameter(f"cannot parse dims {dims!r}; expected LO..HI")
    config = SuiteConfig(suites=tuple(suites) if suites else SUITES,
                         dim_lo=dim_lo, dim_hi=dim_hi, trials=trials,
                         master_seed=seed, tol=tol, output_path=out_path,
                         format=fmt)
    try:
        config.validate()
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)

    aggregate = run_suites(config)
    text = report_json_text(aggregate) if fmt == "json" else report_csv_text(aggregate)
    if out_path:
        try:
            Path(out_path).write_text(text, encoding="utf-8")
        except OSError as exc:
            click.echo(f"cannot write report: {exc}", err=True)
            sys.exit(1)
        click.echo(f"report written to {out_path}")
    else:
        click.echo(text, nl=False)

    failures = aggregate["total_failures"]
    click.echo(f"suites: {len(config.suites)}, failures: {failures}", err=True)
    sys.exit(0 if failures == 0 else 1)


@main.command()
@click.argument("name")
def example(name):
    """Print a named worked example with live verification."""
    try:
        run_worked_example(name, echo=click.echo)
    except UnknownExample as exc:
        click.echo(str(exc), err=True)
        sys.exit(2)


@main.command()
@click.option("--overlap", default=0.25, show_default=True, type=float,
              help="Target |<U'V>| for the regions and the scatter.")
@click.option("--phi", default="pi", show_default=True,
              help="Phase for the corrected ellipse; accepts floats or 'pi' forms.")
@click.option("--samples", default=256, show_default=True, type=int,
              help="Points per boundary curve.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              default="figure1.csv", show_default=True)
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False), default=None,
              help="Image output path; defaults to the CSV path with .png.")
@click.option("--no-plot", is_flag=True, default=False,
              help="Skip the rendered image, emit data only.")
def figure1(overlap, phi, samples, out_path, plot_path, no_plot):
    """Emit unitary-pair region curves plus a conditioned random scatter."""
    try:
        phase = parse_phase(phi)
    except ValueError as exc:
        raise click.BadParameter(str(exc))
    try:
        dataset = build_region_dataset(overlap, phase, samples)
    except ValueError as exc:
        raise click.BadParameter(str(exc))

    try:
        Path(out_path).write_text(region_csv_text(dataset), encoding="utf-8")
    except OSError as exc:
        click.echo(f"cannot write region data: {exc}", err=True)
        sys.exit(1)
    click.echo(f"region data written to {out_path}")

    if not no_plot:
        target = plot_path or str(Path(out_path).with_suffix(".png"))
        render_region_png(target, dataset)
        click.echo(f"figure rendered to {target}")

    inside = sum(dataset.contained)
    total = len(dataset.contained)
    click.echo(f"scatter containment: {inside}/{total} points satisfy all regions")
    sys.exit(0 if dataset.all_contained() else 1)


if __name__ == "__main__":
    main()
