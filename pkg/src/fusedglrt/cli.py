"""Command-line front end: ``fusedglrt <command> [options]``.

Commands print CSV (default) or JSON to stdout or to ``--out``. Numbers are
written with 12 significant digits. Exit codes: 0 success, 1 usage error,
2 unsupported parameters (including resonance), 3 verification failure.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from . import dist, verify
from .errors import (BracketError, FusedGLRTError, NonConvergenceError, ResonanceError,
                     SeparabilityError, UnsupportedClassError)
from .model import FusedModel, make_fused_model
from .specfun import EvalPolicy, GParams, eval_g

EXIT_OK, EXIT_USAGE, EXIT_UNSUPPORTED, EXIT_VERIFY = 0, 1, 2, 3

DEFAULT_N, DEFAULT_M = 6, 16
DEFAULT_ALPHA = 0.01
CONFIG_KEYS = {"sensor_x", "sensor_y", "alpha", "lambda_grid", "dof_literal"}


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return "" if v is None else str(v)


def _json_value(v):
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return float(f"{v:.12g}") if math.isfinite(v) else str(v)
    return v


def _emit(ctx, columns, rows, extra=None):
    """Write a table (or a JSON document) according to ``--format``/``--out``."""
    fmt, out = ctx.obj["format"], ctx.obj["out"]
    if fmt == "json":
        doc = extra if extra is not None else [dict(zip(columns, r)) for r in rows]
        text = json.dumps(_json_value(doc), indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
        text = buf.getvalue()
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _load_config(path):
    if path is None:
        return {}
    try:
        cfg = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise click.UsageError("config must be a JSON object")
    unknown = set(cfg) - CONFIG_KEYS
    if unknown:
        raise click.UsageError(f"unknown config keys: {sorted(unknown)}")
    if ("sensor_x" in cfg) != ("sensor_y" in cfg):
        raise click.UsageError("config needs both sensor_x and sensor_y")
    return cfg


def _pick(flag, cfg, key, default):
    # flags override file values
    if flag is not None:
        return flag
    return cfg.get(key, default)


def _fused_setup(cfg, n, m, d_x, d_y, dof_literal, lambda_x=0.0, lambda_y=0.0):
    """Return ``(FusedModel, FusedDistParams)`` from the config or from flags."""
    if "sensor_x" in cfg:
        fused = FusedModel.from_dict({"sensor_x": cfg["sensor_x"], "sensor_y": cfg["sensor_y"]})
        return fused, verify.dist_params(fused)
    n = DEFAULT_N if n is None else n
    m = DEFAULT_M if m is None else m
    if d_x is None and d_y is None and n == DEFAULT_N and m == DEFAULT_M:
        p = dist.FusedDistParams.default(lambda_x, lambda_y, dof_literal)
        d_x, d_y = p.d_x, p.d_y
    elif d_x is None or d_y is None:
        raise click.UsageError("give both --d-x and --d-y for a non-default configuration")
    fused = make_fused_model(n, d_x, m, d_y, lambda_x, lambda_y)
    p = dist.FusedDistParams(n, m, n - d_x, d_x, m - d_y, d_y, lambda_x, lambda_y)
    return fused, p


def _common(f):
    f = click.option("--config", "config", type=click.Path(dir_okay=False), default=None,
                     help="JSON file: FusedModel schema plus alpha, lambda_grid, dof_literal.")(f)
    f = click.option("--dof-literal", is_flag=True, default=None,
                     help="Default configuration with c_x=2, c_y=3 instead of d_x=2, d_y=3.")(f)
    f = click.option("--N", "n", type=click.IntRange(min=2), default=None,
                     help="Samples of sensor x (default 6).")(f)
    f = click.option("--M", "m", type=click.IntRange(min=2), default=None,
                     help="Samples of sensor y (default 16).")(f)
    f = click.option("--d-x", type=click.IntRange(min=1), default=None,
                     help="Unknown parameters of sensor x.")(f)
    f = click.option("--d-y", type=click.IntRange(min=1), default=None,
                     help="Unknown parameters of sensor y.")(f)
    return f


@click.group()
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file (default stdout).")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.pass_context
def cli(ctx, out, fmt):
    """Fused two-sensor GLRT: exact laws, thresholds and Monte Carlo checks."""
    ctx.ensure_object(dict)
    ctx.obj.update(out=out, format=fmt)


@cli.command("eval-g")
@click.option("--m", "m_", type=int, required=True)
@click.option("--n", "n_", type=int, required=True)
@click.option("--p", "p_", type=int, required=True)
@click.option("--q", "q_", type=int, required=True)
@click.option("--a", "a_", type=float, multiple=True, help="Repeat once per a-parameter.")
@click.option("--b", "b_", type=float, multiple=True, help="Repeat once per b-parameter.")
@click.option("--x", "xs", type=float, multiple=True, required=True, help="Argument(s) > 0.")
@click.option("--strategy", type=click.Choice(["auto", "residue-series", "contour-quadrature"]),
              default="auto", show_default=True)
@click.option("--rel-tol", type=float, default=1e-12, show_default=True)
@click.option("--max-terms", type=int, default=10000, show_default=True)
@click.option("--pole-epsilon", type=float, default=2e-3, show_default=True)
@click.pass_context
def eval_g_cmd(ctx, m_, n_, p_, q_, a_, b_, xs, strategy, rel_tol, max_terms, pole_epsilon):
    """Evaluate a Meijer G-function with an absolute error estimate."""
    if len(a_) != p_ or len(b_) != q_:
        raise click.UsageError(f"need {p_} --a values and {q_} --b values")
    try:
        policy = EvalPolicy(strategy, rel_tol, max_terms, pole_epsilon)
        params = GParams(m_, n_, a_, b_)
    except SeparabilityError:
        raise
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    rows = []
    for x in xs:
        val, err = eval_g(params, x, policy, full_output=True)
        rows.append((x, val, err))
    _emit(ctx, ["x", "value", "abserr"], rows)


@cli.command()
@_common
@click.option("--alpha", type=float, default=None, help="False-alarm rate (default 0.01).")
@click.option("--mode", type=click.Choice(["fused", "single_x", "single_y"]), default="fused",
              show_default=True)
@click.option("--c", "c_single", type=click.IntRange(min=1), default=None,
              help="Single sensor: noise-subspace dimension (use with --d).")
@click.option("--d", "d_single", type=click.IntRange(min=1), default=None,
              help="Single sensor: signal-subspace dimension (use with --c).")
@click.pass_context
def threshold(ctx, config, dof_literal, n, m, d_x, d_y, alpha, mode, c_single, d_single):
    """Neyman-Pearson threshold for a target false-alarm rate."""
    cfg = _load_config(config)
    alpha = float(_pick(alpha, cfg, "alpha", DEFAULT_ALPHA))
    if not 0 < alpha < 1:
        raise click.UsageError("alpha must lie in (0, 1)")
    if (c_single is None) != (d_single is None):
        raise click.UsageError("--c and --d go together")
    if c_single is not None:
        n1 = c_single + d_single
        p = dist.FusedDistParams(n1, n1, c_single, d_single, c_single, d_single)
        mode = "single_x"
    else:
        _, p = _fused_setup(cfg, n, m, d_x, d_y, bool(_pick(dof_literal, cfg, "dof_literal", False)))
    gamma = dist.threshold_for_pfa(alpha, p.central(), mode)
    _emit(ctx, ["alpha", "mode", "gamma"], [(alpha, mode, gamma)])


def _lambda_list(values, cfg):
    if values:
        grid = list(values)
    else:
        grid = cfg.get("lambda_grid", list(np.arange(1, 31, dtype=float)))
    grid = [float(v) for v in grid]
    if not grid or min(grid) <= 0:
        raise click.UsageError("lambda grid must be nonempty and positive")
    return grid


@cli.command("pd-curve")
@_common
@click.option("--alpha", type=float, default=None, help="False-alarm rate (default 0.01).")
@click.option("--lambda", "lambdas", type=float, multiple=True,
              help="Grid value, used for both sensors; repeatable (default 1..30).")
@click.pass_context
def pd_curve(ctx, config, dof_literal, n, m, d_x, d_y, alpha, lambdas):
    """Detection probability against noncentrality at a fixed false-alarm rate."""
    cfg = _load_config(config)
    alpha = float(_pick(alpha, cfg, "alpha", DEFAULT_ALPHA))
    if not 0 < alpha < 1:
        raise click.UsageError("alpha must lie in (0, 1)")
    grid = _lambda_list(lambdas, cfg)
    _, p0 = _fused_setup(cfg, n, m, d_x, d_y, bool(_pick(dof_literal, cfg, "dof_literal", False)))
    p0 = p0.central()
    gammas = {mode: dist.threshold_for_pfa(alpha, p0, mode)
              for mode in ("fused", "single_x", "single_y")}
    rows, failures = [], 0
    for lam in grid:
        p = p0.with_lambdas(lam, lam)
        try:
            pds = [float(dist.sf_h1(gammas[mode], p, mode))
                   for mode in ("fused", "single_x", "single_y")]
            rows.append((lam, lam, *pds, ""))
        except (ResonanceError, NonConvergenceError) as exc:
            failures += 1
            rows.append((lam, lam, None, None, None, f"{type(exc).__name__}: {exc}"))
    _emit(ctx, ["lambda_x", "lambda_y", "pd_fused", "pd_single_x", "pd_single_y", "error"], rows)
    if failures == len(rows):
        ctx.exit(EXIT_UNSUPPORTED)


@cli.command()
@_common
@click.option("--lambda-x", type=float, default=15.0, show_default=True)
@click.option("--lambda-y", type=float, default=15.0, show_default=True)
@click.option("--gamma", "gammas", type=float, multiple=True, help="Threshold grid point; repeatable.")
@click.option("--alpha", "alphas", type=float, multiple=True,
              help="False-alarm grid point; repeatable (default 1e-4..0.5).")
@click.option("--mode", type=click.Choice(["fused", "single_x", "single_y"]), default="fused",
              show_default=True)
@click.pass_context
def roc(ctx, config, dof_literal, n, m, d_x, d_y, lambda_x, lambda_y, gammas, alphas, mode):
    """Receiver operating characteristic from a threshold or false-alarm grid."""
    cfg = _load_config(config)
    if gammas and alphas:
        raise click.UsageError("give either --gamma or --alpha values, not both")
    _, p = _fused_setup(cfg, n, m, d_x, d_y, bool(_pick(dof_literal, cfg, "dof_literal", False)),
                        lambda_x, lambda_y)
    if "sensor_x" not in cfg:
        p = p.with_lambdas(lambda_x, lambda_y)
    p0 = p.central()
    rows = []
    if gammas:
        if min(gammas) < 1:
            raise click.UsageError("thresholds must be >= 1")
        pairs = [(g, None) for g in gammas]
    else:
        alist = alphas or tuple(np.geomspace(1e-4, 0.5, 25))
        if not all(0 < a < 1 for a in alist):
            raise click.UsageError("alpha values must lie in (0, 1)")
        pairs = [(dist.threshold_for_pfa(a, p0, mode), a) for a in alist]
    for g, a in pairs:
        pfa = a if a is not None else (1.0 if g <= 1 else float(dist.sf_h0(g, p0, mode)))
        pd = 1.0 if g <= 1 else float(dist.sf_h1(g, p, mode))
        rows.append((g, pfa, pd))
    _emit(ctx, ["gamma", "pfa", "pd"], rows)


@cli.command("verify")
@_common
@click.option("--hypothesis", type=click.Choice(["H0", "H1"]), default="H0", show_default=True)
@click.option("--lambda-x", type=float, default=5.0, show_default=True)
@click.option("--lambda-y", type=float, default=5.0, show_default=True)
@click.option("--trials", type=click.IntRange(min=1), default=100_000, show_default=True)
@click.option("--seed", type=click.IntRange(min=0, max=2**64 - 1), default=0, show_default=True)
@click.option("--gamma", type=float, default=None,
              help="Also report the empirical exceedance rate of this threshold.")
@click.option("--dof-shift", type=int, default=0, hidden=True,
              help="Move one degree of freedom on the analytic side (negative control).")
@click.pass_context
def verify_cmd(ctx, config, dof_literal, n, m, d_x, d_y, hypothesis, lambda_x, lambda_y,
               trials, seed, gamma, dof_shift):
    """Monte Carlo KS check of the analytic CDF (JSON report)."""
    cfg = _load_config(config)
    fused, p = _fused_setup(cfg, n, m, d_x, d_y, bool(_pick(dof_literal, cfg, "dof_literal", False)),
                            lambda_x, lambda_y)
    if dof_shift:
        try:
            p = dist.FusedDistParams(p.N, p.M, p.c_x + dof_shift, p.d_x - dof_shift,
                                     p.c_y, p.d_y, p.lambda_x, p.lambda_y)
        except ValueError as exc:
            raise click.UsageError(str(exc)) from exc
    mc = verify.McConfig(trials, seed)
    samples = verify.mc_statistic_samples(fused, hypothesis, mc)
    if hypothesis == "H0":
        cdf = lambda z: dist.cdf_h0_fused(z, p.central())
    else:
        cdf = lambda z: dist.cdf_h1_fused(z, p)
    F, interp_err = verify.interpolated_cdf(cdf, samples)
    ks = verify.ks_statistic(samples, F)
    crit = verify.ks_critical(trials)
    report = {
        "hypothesis": hypothesis, "trials": trials, "seed": seed,
        "N": p.N, "M": p.M, "c_x": p.c_x, "d_x": p.d_x, "c_y": p.c_y, "d_y": p.d_y,
        "lambda_x": p.lambda_x if hypothesis == "H1" else 0.0,
        "lambda_y": p.lambda_y if hypothesis == "H1" else 0.0,
        "ks": ks, "critical": crit, "interpolation_error": interp_err,
        "pass": bool(ks <= crit),
    }
    if gamma is not None:
        if gamma < 1:
            raise click.UsageError("gamma must be >= 1")
        rate = float(np.mean(samples > gamma))
        key = "pfa" if hypothesis == "H0" else "pd"
        analytic = float(dist.sf_h0(gamma, p.central()) if hypothesis == "H0"
                         else dist.sf_h1(gamma, p))
        report.update({"gamma": gamma, f"{key}_hat": rate,
                       f"{key}_se": verify.binomial_se(rate, trials), f"{key}_analytic": analytic})
    if ctx.obj["format"] == "csv":
        _emit(ctx, list(report), [tuple(report.values())])
    else:
        _emit(ctx, None, None, extra=report)
    if not report["pass"]:
        ctx.exit(EXIT_VERIFY)


def run(argv=None) -> int:
    """Run the CLI and return its exit code instead of exiting."""
    try:
        rv = cli.main(args=argv, prog_name="fusedglrt", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    except (ResonanceError, UnsupportedClassError, SeparabilityError) as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        return EXIT_UNSUPPORTED
    except (BracketError, NonConvergenceError) as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        return EXIT_UNSUPPORTED
    except (FusedGLRTError, ValueError) as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        return EXIT_USAGE
    return rv if isinstance(rv, int) else EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
