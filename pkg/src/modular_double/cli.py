"""``mdverify``: evaluate functions, run verification suites, emit tables.

Exit codes: 0 success, 1 convergence or check failure, 2 evaluation at a
pole, 64 usage error.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import click
import numpy as np

from .dilog import gb_eval, gb_eval_many, is_pole, is_zero, qbeta, zeta_b
from .errors import (
    MarginViolation,
    NonConvergence,
    ParameterError,
    PoleEvaluation,
    UnresolvablePole,
)
from .gaussian import wavepacket_coeff
from .params import ModularParameter, QuadratureSpec
from .reps import MUTATIONS
from .suites import DEFAULT_TOLERANCES, SUITES, SuiteConfig, build_report, run_suite, summary_line

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_POLE = 2
EXIT_USAGE = 64

DEFAULT_QUAD_TEXT = "40,auto,64,1e-10"
FORMATS = ("json", "csv", "text")


@dataclass
class Result:
    """One evaluated value with its error estimate and lattice flags."""

    inputs: dict
    value: complex | None
    abs_err: float
    at_pole: bool = False
    at_zero: bool = False

    def row(self) -> dict:
        v = self.value
        return {
            **self.inputs,
            "re": None if v is None else v.real,
            "im": None if v is None else v.imag,
            "abs_err": self.abs_err,
            "at_pole": self.at_pole,
            "at_zero": self.at_zero,
        }


# ---------------------------------------------------------------- parsing


def _complex(text: str, flag: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise click.UsageError(f"{flag} expects re,im; got {text!r}")


def _param(b: float) -> ModularParameter:
    try:
        return ModularParameter.validated(b)
    except ParameterError as exc:
        raise click.UsageError(str(exc)) from exc


def _quad(text: str) -> QuadratureSpec:
    try:
        return QuadratureSpec.parse(text)
    except ParameterError as exc:
        raise click.UsageError(str(exc)) from exc


def _require(value, flag: str, fn: str):
    if value is None:
        raise click.UsageError(f"{fn} needs {flag}")
    return value


def parse_range(text: str, spacing: str = "linear") -> np.ndarray:
    """``start:stop:step`` (stop included) or, for log spacing, ``start:stop:count``.

    A bare number is a single point.
    """
    parts = text.split(":")
    try:
        nums = [float(p) for p in parts]
    except ValueError as exc:
        raise click.UsageError(f"bad range {text!r}") from exc
    if len(nums) == 1:
        return np.array(nums)
    if len(nums) != 3:
        raise click.UsageError(f"range must be start:stop:step, got {text!r}")
    start, stop, third = nums
    if spacing == "log":
        count = int(third)
        if count != third or count < 1 or start <= 0 or stop <= 0 or start > stop:
            raise click.UsageError(f"empty or invalid log range {text!r}")
        return np.geomspace(start, stop, count)
    if third == 0 or (stop - start) / third < 0:
        raise click.UsageError(f"empty range {text!r}")
    count = int(math.floor((stop - start) / third + 1e-9)) + 1
    return start + third * np.arange(count)


# ---------------------------------------------------------------- evaluation


def eval_Gb(param, quad, z: complex) -> Result:
    g = gb_eval(param, z, quad)
    return Result({"re_z": z.real, "im_z": z.imag}, g.value, g.abs_error_estimate, g.at_pole, g.at_zero)


def eval_little_gb(param, quad, x: float) -> Result:
    if not x > 0:
        raise click.UsageError("gb needs --x > 0")
    z = 0.5 * param.Q + math.log(x) / (2j * math.pi * param.base)
    g = gb_eval(param, z, quad, strict=True)
    value = zeta_b(param).conjugate() / g.value
    # |d(1/G)| = |dG| / |G|^2
    return Result({"x": x}, value, g.abs_error_estimate / abs(g.value) ** 2)


def eval_zeta(param, quad) -> Result:
    return Result({}, zeta_b(param), 0.0)


def eval_qbeta(param, quad, t: complex, tau: complex) -> Result:
    inputs = {"re_t": t.real, "im_t": t.imag, "re_tau": tau.real, "im_tau": tau.imag}
    value = qbeta(param, t, tau, quad)
    Q = param.Q
    args = [Q + t, Q + tau, Q + t - tau]
    if all(is_zero(param, a) for a in args):
        return Result(inputs, value, 0.0)
    vals, errs = gb_eval_many(param, args, quad)
    rel = float(np.sum(errs / np.abs(vals)))
    return Result(inputs, value, abs(value) * rel)


def eval_wavepacket(param, quad, lam: float, t: complex) -> Result:
    if not lam > 0:
        raise click.UsageError("wavepacket needs --lambda > 0")
    w = wavepacket_coeff(param, lam, t, quad)
    z0 = 0.5 * param.Q - 1j * lam
    if is_pole(param, z0 + 1j * t):
        raise PoleEvaluation(f"G_b pole at {z0 + 1j * t}")
    vals, errs = gb_eval_many(param, [z0 + 1j * t, z0], quad)
    rel = float(np.sum(errs / np.abs(vals)))
    return Result({"lambda": lam, "re_t": t.real, "im_t": t.imag}, w.value, abs(w.value) * rel)


# ---------------------------------------------------------------- output


def _fmt_float(x) -> str:
    return "nan" if x is None else repr(float(x))


def _cell(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    return _fmt_float(v) if isinstance(v, float) or v is None else str(v)


def _emit_results(results: list[Result], fmt: str) -> str:
    rows = [r.row() for r in results]
    if fmt == "json":
        return json.dumps(rows[0] if len(rows) == 1 else rows, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = list(rows[0]) if rows else []
        writer.writerow(header)
        for r in rows:
            writer.writerow([_cell(v) for v in r.values()])
        return buf.getvalue().rstrip("\n")
    lines = []
    for r in results:
        lines.extend(f"{k} = {v!r}" for k, v in r.inputs.items())
        if r.value is None:
            lines.append("value = pole")
        else:
            lines.append(f"value = {r.value.real!r} {'+' if r.value.imag >= 0 else '-'} {abs(r.value.imag)!r}i")
        lines.append(f"abs_err = {r.abs_err!r}")
        lines.append(f"at_pole = {str(r.at_pole).lower()}")
        lines.append(f"at_zero = {str(r.at_zero).lower()}")
    return "\n".join(lines)


def _run_numeric(fn):
    """Map library errors to exit codes; returns (result or None, exit code)."""
    try:
        return fn(), EXIT_OK
    except (PoleEvaluation, UnresolvablePole) as exc:
        click.echo(f"pole: {exc}", err=True)
        return None, EXIT_POLE
    except NonConvergence as exc:
        click.echo(f"convergence failure: {exc}", err=True)
        return None, EXIT_FAILURE
    except (MarginViolation, ParameterError) as exc:
        raise click.UsageError(str(exc)) from exc


# ---------------------------------------------------------------- commands

b_option = click.option("--b", "b", type=float, default=0.7, show_default=True, help="Parameter b in [0.1, 0.95].")
quad_option = click.option("--quad", "quad_text", default=DEFAULT_QUAD_TEXT, show_default=True,
                           help="Quadrature T,r,panels,eps; r may be 'auto' (min(b,1/b)/2).")
format_option = click.option("--format", "fmt", type=click.Choice(FORMATS), default="text", show_default=True)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli() -> None:
    """Numerical and symbolic checks for the modular double of U_q(sl_n)."""


@cli.command("eval")
@click.argument("function", type=click.Choice(["Gb", "gb", "zeta", "qbeta", "wavepacket"]))
@b_option
@click.option("--z", "z_text", help="Argument z as re,im (Gb).")
@click.option("--x", "x", type=float, help="Positive argument x (gb).")
@click.option("--t", "t_text", help="t as re,im (qbeta, wavepacket).")
@click.option("--tau", "tau_text", help="tau as re,im (qbeta).")
@click.option("--lambda", "lam", type=float, help="Spectral parameter lambda > 0 (wavepacket).")
@quad_option
@format_option
def eval_cmd(function, b, z_text, x, t_text, tau_text, lam, quad_text, fmt) -> int:
    """Evaluate one function and print value, error estimate and lattice flags."""
    param = _param(b)
    quad = _quad(quad_text)
    if function == "Gb":
        z = _complex(_require(z_text, "--z", "Gb"), "--z")
        job = lambda: eval_Gb(param, quad, z)  # noqa: E731
    elif function == "gb":
        xv = _require(x, "--x", "gb")
        job = lambda: eval_little_gb(param, quad, xv)  # noqa: E731
    elif function == "zeta":
        job = lambda: eval_zeta(param, quad)  # noqa: E731
    elif function == "qbeta":
        t = _complex(_require(t_text, "--t", "qbeta"), "--t")
        tau = _complex(_require(tau_text, "--tau", "qbeta"), "--tau")
        job = lambda: eval_qbeta(param, quad, t, tau)  # noqa: E731
    else:
        lv = _require(lam, "--lambda", "wavepacket")
        t = _complex(_require(t_text, "--t", "wavepacket"), "--t")
        job = lambda: eval_wavepacket(param, quad, lv, t)  # noqa: E731
    result, code = _run_numeric(job)
    if result is not None:
        click.echo(_emit_results([result], fmt))
        if result.at_pole:
            return EXIT_POLE
    return code


def _parse_tols(items: tuple[str, ...]) -> dict[str, float]:
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep or name not in DEFAULT_TOLERANCES:
            raise click.UsageError(f"--tol expects name=value with name in {sorted(DEFAULT_TOLERANCES)}; got {item!r}")
        try:
            out[name] = float(value)
        except ValueError as exc:
            raise click.UsageError(f"bad tolerance value in {item!r}") from exc
    return out


def render_report(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=False)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["name", "pass", "residual", "tolerance", "paper_ref"])
        for c in report["checks"]:
            writer.writerow([c["name"], str(c["pass"]).lower(), _fmt_float(c["residual"]),
                             _fmt_float(c["tolerance"]), c["paper_ref"]])
        return buf.getvalue().rstrip("\n")
    width = max((len(c["name"]) for c in report["checks"]), default=0)
    return "\n".join(
        f"{'PASS' if c['pass'] else 'FAIL'}  {c['name']:<{width}}  residual={_fmt_float(c['residual'])}"
        f"  tol={_fmt_float(c['tolerance'])}"
        for c in report["checks"]
    )


@cli.command("verify")
@click.argument("suite", type=click.Choice(SUITES))
@b_option
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for randomised sweeps.")
@click.option("--tol", "tols", multiple=True, help="Override a tolerance family: name=value (repeatable).")
@quad_option
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="json", show_default=True)
@click.option("--out", "out", type=click.Path(dir_okay=False, writable=True),
              help="Write the report here; otherwise it goes to stdout.")
@click.option("--mutate", type=click.Choice(MUTATIONS), help="Inject a deliberate error (negative control).")
def verify_cmd(suite, b, seed, tols, quad_text, fmt, out, mutate) -> int:
    """Run a verification suite; exit 0 iff every check passes."""
    try:
        cfg = SuiteConfig(b=b, seed=seed, quad=_quad(quad_text), tolerances=_parse_tols(tols), mutate=mutate)
    except ParameterError as exc:
        raise click.UsageError(str(exc)) from exc
    checks = run_suite(suite, cfg)
    text = render_report(build_report(suite, cfg, checks), fmt)
    summary = summary_line(checks)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        click.echo(summary)
    else:
        click.echo(text)
        click.echo(summary, err=True)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAILURE


@cli.command("table")
@click.argument("function", type=click.Choice(["Gb", "gb", "wavepacket"]))
@b_option
@click.option("--re", "re_text", help="Re z range for Gb (default Q/2, the critical line).")
@click.option("--im", "im_text", help="Im z range for Gb.")
@click.option("--x", "x_text", help="x range for gb (x > 0).")
@click.option("--t", "t_text", help="Real t range for wavepacket.")
@click.option("--lambda", "lam", type=float, default=0.5, show_default=True, help="lambda for wavepacket.")
@click.option("--spacing", type=click.Choice(["linear", "log"]), default="linear", show_default=True,
              help="log: ranges are start:stop:count with geometric spacing.")
@quad_option
def table_cmd(function, b, re_text, im_text, x_text, t_text, lam, spacing, quad_text) -> int:
    """Emit a CSV table (inputs..., re, im, abs_err)."""
    param = _param(b)
    quad = _quad(quad_text)
    if function == "Gb":
        res = parse_range(re_text, spacing) if re_text else np.array([0.5 * param.Q])
        ims = parse_range(_require(im_text, "--im", "table Gb"), spacing)
        jobs = [lambda r=r, i=i: eval_Gb(param, quad, complex(r, i)) for r in res for i in ims]
        cols = ["re_z", "im_z"]
    elif function == "gb":
        xs = parse_range(_require(x_text, "--x", "table gb"), spacing)
        jobs = [lambda x=x: eval_little_gb(param, quad, float(x)) for x in xs]
        cols = ["x"]
    else:
        ts = parse_range(_require(t_text, "--t", "table wavepacket"), spacing)
        jobs = [lambda t=t: eval_wavepacket(param, quad, lam, complex(t)) for t in ts]
        cols = ["lambda", "re_t"]
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow([*cols, "re", "im", "abs_err"])
    worst = EXIT_OK
    for job in jobs:
        result, code = _run_numeric(job)
        worst = max(worst, code)
        if result is None:
            continue
        row = result.row()
        writer.writerow([_fmt_float(row[c]) for c in cols]
                        + [_fmt_float(row["re"]), _fmt_float(row["im"]), _fmt_float(row["abs_err"])])
        if result.at_pole:
            worst = max(worst, EXIT_POLE)
    sys.stdout.flush()
    return worst


def main(argv: list[str] | None = None) -> None:
    """Console entry point; usage errors exit with code 64."""
    try:
        code = cli.main(args=argv, prog_name="mdverify", standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        sys.exit(EXIT_USAGE)
    except click.ClickException as exc:
        exc.show()
        sys.exit(EXIT_USAGE)
    except click.Abort:
        click.echo("aborted", err=True)
        sys.exit(EXIT_FAILURE)
    sys.exit(code if isinstance(code, int) else EXIT_OK)


if __name__ == "__main__":
    main()
