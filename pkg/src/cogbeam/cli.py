"""Command-line client of the cogbeam service.

Every subcommand posts to the HTTP API; without --server the app runs
in-process over an ASGI transport, so no separate server is needed.  CSV
output is written locally from the returned table.

Exit codes: 0 success, 2 validation failure, 3 non-convergence in any row,
4 I/O error.
"""

import asyncio
import json
import sys

import click
import httpx

from .sweeps import SweepTable, emit_csv, figure_names

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NONCONVERGENCE = 3
EXIT_IO = 4


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


class ServiceClient:
    """Thin HTTP client; in-process ASGI when no server URL is given."""

    def __init__(self, server=None):
        self.server = server

    def post(self, path, payload):
        if self.server:
            try:
                with httpx.Client(base_url=self.server, timeout=None) as client:
                    response = client.post(path, json=payload)
            except httpx.HTTPError as exc:
                raise CliError(EXIT_IO, f"cannot reach {self.server}: {exc}")
        else:
            response = asyncio.run(self._post_inprocess(path, payload))
        if response.status_code == 200:
            return response.json()
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise CliError(EXIT_VALIDATION, f"{detail}")

    @staticmethod
    async def _post_inprocess(path, payload):
        from .service import create_app

        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://cogbeam",
                                     timeout=None) as client:
            return await client.post(path, json=payload)


def _load_tree(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_VALIDATION,
                       f"{path}: parse error at line {exc.lineno}, "
                       f"column {exc.colno}: {exc.msg}")


def _search_overrides(grid, tol, xi_kappa, max_iters):
    overrides = {}
    if grid:
        try:
            a, b = grid.lower().split("x")
            overrides["phi_t_grid"] = int(a)
            overrides["tau_grid"] = int(b)
        except ValueError:
            raise CliError(EXIT_VALIDATION, f"--grid must look like 33x33, got {grid!r}")
    if tol is not None:
        overrides["tol"] = tol
    if xi_kappa is not None:
        overrides["xi_kappa"] = xi_kappa
    if max_iters is not None:
        overrides["max_iters"] = max_iters
    return overrides


def _write_table(table_payload, out):
    table = SweepTable(header=tuple(table_payload["header"]),
                       rows=tuple(tuple(r) for r in table_payload["rows"]))
    if out:
        try:
            emit_csv(table, out)
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot write {out}: {exc}")
    else:
        from .sweeps import _format_cell
        click.echo(",".join(table.header))
        for row in table.rows:
            click.echo(",".join(_format_cell(v) for v in row))
    return table_payload.get("any_nonconverged", False)


def _common_options(fn):
    fn = click.option("--scenario", "scenario_path", required=True,
                      type=click.Path(), help="Scenario JSON config file.")(fn)
    fn = click.option("--server", default=None,
                      help="Base URL of a running service; default in-process.")(fn)
    return fn


def _search_options(fn):
    fn = click.option("--grid", default=None, help="Outer grid, e.g. 33x33.")(fn)
    fn = click.option("--tol", default=None, type=float,
                      help="Refinement tolerance per variable.")(fn)
    fn = click.option("--xi-kappa", default=None, type=float,
                      help="Threshold position in the concavity window [0,1).")(fn)
    fn = click.option("--max-iters", default=None, type=int,
                      help="Refinement iteration cap.")(fn)
    return fn


@click.group()
def cli():
    """Ergodic-capacity optimization for a cognitive radio link with
    steerable directional antennas."""


@cli.command()
@_common_options
@click.option("--seed", default=20250809, type=int, show_default=True)
@click.option("--mc-samples", default=10 ** 6, type=int, show_default=True)
def validate(scenario_path, server, seed, mc_samples):
    """Run every oracle cross-check against the scenario."""
    tree = _load_tree(scenario_path)
    client = ServiceClient(server)
    payload = {"scenario": tree, "seed": seed, "mc_samples": mc_samples}
    result = client.post("/checks", payload)
    for check in result["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        click.echo(f"{status} {check['name']}: {check['detail']}")
    if not result["all_passed"]:
        sys.exit(EXIT_VALIDATION)


@cli.command()
@_common_options
@_search_options
@click.option("--variant", type=click.Choice(["dir", "omni", "los"]),
              default="dir", show_default=True)
@click.option("--out", default=None, type=click.Path(),
              help="Write the result row as CSV.")
def optimize(scenario_path, server, grid, tol, xi_kappa, max_iters, variant, out):
    """Optimize one scenario and report the decision variables."""
    tree = _load_tree(scenario_path)
    client = ServiceClient(server)
    payload = {"scenario": tree, "variant": variant,
               "search": _search_overrides(grid, tol, xi_kappa, max_iters)}
    res = client.post("/optimize", payload)
    header = ["tau_opt_s", "phi_t_opt_deg", "phi_r_opt_deg", "p_opt_w",
              "c_opt", "binding", "iterations", "converged"]
    table = {"header": header, "rows": [[res[k] for k in header]],
             "any_nonconverged": not res["converged"]}
    nonconverged = _write_table(table, out)
    if nonconverged:
        sys.exit(EXIT_NONCONVERGENCE)


@cli.command()
@_common_options
@_search_options
@click.option("--variable", required=True,
              type=click.Choice(["tau", "epsilon", "theta", "p_p", "phi_3db", "p_pk"]))
@click.option("--values", required=True,
              help="Comma-separated swept values (degrees for angles).")
@click.option("--mode", type=click.Choice(["evaluate-only", "full-reoptimize"]),
              default="full-reoptimize", show_default=True)
@click.option("--baselines", default="dir", show_default=True,
              help="Comma-separated subset of dir,omni,los.")
@click.option("--out", default=None, type=click.Path())
def sweep(scenario_path, server, grid, tol, xi_kappa, max_iters,
          variable, values, mode, baselines, out):
    """Sweep one variable and emit the results table."""
    tree = _load_tree(scenario_path)
    try:
        parsed = [float(v) for v in values.split(",") if v.strip()]
    except ValueError:
        raise CliError(EXIT_VALIDATION, f"--values must be numbers, got {values!r}")
    client = ServiceClient(server)
    payload = {
        "scenario": tree,
        "sweep": {"variable": variable, "values": parsed, "mode": mode,
                  "baselines": [b.strip() for b in baselines.split(",") if b.strip()]},
        "search": _search_overrides(grid, tol, xi_kappa, max_iters),
    }
    result = client.post("/sweep", payload)
    if _write_table(result, out):
        sys.exit(EXIT_NONCONVERGENCE)


def _figure_command(name):
    @cli.command(name=name)
    @_common_options
    @_search_options
    @click.option("--out", default=None, type=click.Path())
    def _cmd(scenario_path, server, grid, tol, xi_kappa, max_iters, out):
        tree = _load_tree(scenario_path)
        client = ServiceClient(server)
        payload = {"scenario": tree,
                   "search": _search_overrides(grid, tol, xi_kappa, max_iters)}
        result = client.post(f"/figures/{name}", payload)
        if _write_table(result, out):
            sys.exit(EXIT_NONCONVERGENCE)

    _cmd.__doc__ = f"Preset sweep reproducing the {name} structure."
    return _cmd


for _name in figure_names():
    _figure_command(_name)


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


def main():
    try:
        cli(standalone_mode=False)
    except CliError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.code)
    except click.ClickException as exc:
        exc.show()
        sys.exit(EXIT_VALIDATION)
    except click.exceptions.Abort:
        sys.exit(EXIT_VALIDATION)


if __name__ == "__main__":
    main()
