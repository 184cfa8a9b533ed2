"""Command-line interface.

Exit codes: 0 on success, 1 on input errors, 2 on verification failure.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .balance import OracleLimitError
from .graph import GraphError, connected_components, export_dot, load_edge_list
from .harness import ALGORITHMS, ExperimentConfig, records_to_csv, run_experiment, sweep
from .verify import overall_success, run_all


def _load(path: str, sign_from_weight: bool):
    try:
        with open(path, "rb") as fh:
            return load_edge_list(fh, sign_from_weight=sign_from_weight)
    except (OSError, GraphError) as exc:
        raise click.ClickException(str(exc)) from exc


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError as exc:
        raise click.ClickException(f"bad integer list {text!r}") from exc


@click.group()
def main():
    """Balance signed networks by deleting a budgeted set of edges."""


@main.command("load-info")
@click.argument("file", type=click.Path(exists=True))
@click.option("--strict-signs", is_flag=True, help="Require +-1 signs instead of deriving them from weights.")
def load_info(file: str, strict_signs: bool):
    """Parse FILE and print its basic statistics."""
    g, report = _load(file, not strict_signs)
    comps = connected_components(g)
    neg = int((g.edge_sign < 0).sum()) if g.m else 0
    click.echo(f"nodes: {g.n}")
    click.echo(f"edges: {g.m}")
    click.echo(f"negative_fraction: {neg / g.m:.4f}" if g.m else "negative_fraction: n/a")
    click.echo(f"components: {len(comps)}")
    click.echo(f"largest_component: {max((len(c) for c in comps), default=0)}")
    for key, val in report.to_dict().items():
        click.echo(f"{key}: {val}")


@main.command()
@click.argument("file", type=click.Path(exists=True))
@click.option("--algo", type=click.Choice(ALGORITHMS), default="greedy", show_default=True)
@click.option("--budget", type=int, default=10, show_default=True)
@click.option("--kcore", type=int, default=None, help="Target the k-core instead of the LCC.")
@click.option("--seed", type=int, default=None)
@click.option("--candidates", type=click.Choice(["all", "peripheral"]), default="peripheral", show_default=True)
@click.option("--oracle", is_flag=True, help="Cross-check against the exhaustive optimum (small graphs).")
@click.option("--exact-initial", is_flag=True, help="Exact initial balanced subgraph (small graphs).")
@click.option("--strict-signs", is_flag=True)
@click.option("--no-timing", is_flag=True, help="Zero the timing fields for byte-stable output.")
@click.option("--csv", "csv_path", type=click.Path(), default=None, help="Append the CSV row to this file.")
def optimize(file, algo, budget, kcore, seed, candidates, oracle, exact_initial, strict_signs, no_timing, csv_path):
    """Run one algorithm on FILE and print the run record as JSON."""
    cfg = ExperimentConfig(
        dataset=file,
        selector="kcore" if kcore else "lcc",
        k=kcore,
        algorithm=algo,
        budget=budget,
        candidates=candidates,
        seed=seed,
        sign_from_weight=not strict_signs,
        exact_initial=exact_initial,
        oracle=oracle,
        timing=not no_timing,
    )
    try:
        record = run_experiment(cfg)
    except (GraphError, OracleLimitError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(record.to_json())
    csv_text = records_to_csv([record])
    if csv_path:
        path = Path(csv_path)
        if path.exists() and path.stat().st_size > 0:
            with path.open("a") as fh:
                fh.write(record.csv_row() + "\n")
        else:
            path.write_text(csv_text)
    else:
        click.echo(csv_text, nl=False)


@main.command("sweep")
@click.argument("file", type=click.Path(exists=True))
@click.option("--algo", type=click.Choice(ALGORITHMS), default="greedy", show_default=True)
@click.option("--budgets", default=None, help="Budget list, e.g. '10,30,50'.")
@click.option("--kcores", default=None, help="k list for k-core targets.")
@click.option("--budget", type=int, default=10, show_default=True, help="Budget when --budgets is absent.")
@click.option("--seed", type=int, default=None)
@click.option("--candidates", type=click.Choice(["all", "peripheral"]), default="peripheral", show_default=True)
@click.option("--strict-signs", is_flag=True)
@click.option("--no-timing", is_flag=True)
@click.option("--out", type=click.Path(), default=None, help="Write the CSV here instead of stdout.")
def sweep_cmd(file, algo, budgets, kcores, budget, seed, candidates, strict_signs, no_timing, out):
    """Run a budget and/or k-core sweep; emits one CSV row per cell."""
    cfg = ExperimentConfig(
        dataset=file,
        selector="lcc",
        algorithm=algo,
        budget=budget,
        candidates=candidates,
        seed=seed,
        sign_from_weight=not strict_signs,
        timing=not no_timing,
        k=None,
    )
    budget_list = _parse_int_list(budgets) if budgets else None
    kcore_list = _parse_int_list(kcores) if kcores else None
    try:
        records, errors = sweep(cfg, budgets=budget_list, kcores=kcore_list)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    csv_text = records_to_csv(records)
    if out:
        Path(out).write_text(csv_text)
    else:
        click.echo(csv_text, nl=False)
    for err in errors:
        click.echo(f"error: {err}", err=True)


@main.command("verify")
@click.option("--max-nodes", type=int, default=5, show_default=True,
              help="Exhaustive size for the balance/spectrum equivalence.")
@click.option("--fast", is_flag=True, help="Shrink sample counts for a quick pass.")
def verify_cmd(max_nodes: int, fast: bool):
    """Run the cross-module verification suites."""
    from . import verify as verify_mod

    results = run_all(fast=fast)
    if max_nodes != 5:
        results[0] = verify_mod.suite_balance_spectrum(max_nodes=max_nodes)
    for res in results:
        click.echo(res.line())
        for failure in res.failures:
            click.echo(f"    counterexample: {failure}")
    if not overall_success(results):
        sys.exit(2)


@main.command("export-dot")
@click.argument("file", type=click.Path(exists=True))
@click.option("--strict-signs", is_flag=True)
@click.option("--max-nodes", type=int, default=200, show_default=True)
@click.option("--out", type=click.Path(), default=None)
def export_dot_cmd(file, strict_signs, max_nodes, out):
    """Emit Graphviz DOT for a small graph (negative edges dashed)."""
    g, _ = _load(file, not strict_signs)
    try:
        dot = export_dot(g, max_nodes=max_nodes)
    except GraphError as exc:
        raise click.ClickException(str(exc)) from exc
    if out:
        Path(out).write_text(dot)
    else:
        click.echo(dot, nl=False)


if __name__ == "__main__":
    main()
