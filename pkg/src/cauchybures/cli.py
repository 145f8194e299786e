"""Command-line front end: evaluation, grid generation, verification.

Exit codes: 0 success, 1 usage or validation error, 2 numerical
non-convergence, 3 verification failure.
"""
from __future__ import annotations

import json
import math
import sys
from dataclasses import asdict, dataclass

import click
import numpy as np

from . import correlations, ensembles, kernels, polynomials
from .raney import raney as raney_number
from .raney import sz_moment
from .exceptions import (CauchyBuresError, DomainError, NonConverged,
                         PoleCollisionError)
from .foxh import (FoxHSpec, hankel_loop, min_family_separation,
                   residue_series)
from .numerics import SkewMatrix, gauss_jacobi, pfaffian

# the spec'd exit contract reserves 2 for non-convergence; route click's
# usage failures to 1 instead
click.UsageError.exit_code = 1


@dataclass(frozen=True)
class RunConfig:
    """Full invocation record embedded in every output artifact."""

    command: str
    options: dict

    def as_dict(self) -> dict:
        return {"command": self.command, "options": self.options}


def _fail(code: int, message: str):
    click.echo(message, err=True)
    sys.exit(code)


@click.group()
def main():
    """Numerics for the deformed Cauchy two-matrix model and Bures ensemble."""


# ---------------------------------------------------------------------------
# foxh
# ---------------------------------------------------------------------------

def _load_foxh_spec(path: str) -> FoxHSpec:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        _fail(1, f"cannot parse spec file: {exc}")
    for key in ("upper", "lower", "m", "n"):
        if key not in raw:
            _fail(1, f"spec file missing field {key!r}")
    for key in ("upper", "lower"):
        entries = raw[key]
        if not isinstance(entries, list) or any(
                not isinstance(e, list) or len(e) != 2 for e in entries):
            _fail(1, f"field {key!r} must be a list of [shift, slope] pairs")
    try:
        return FoxHSpec(upper=tuple(tuple(map(float, e)) for e in raw["upper"]),
                        lower=tuple(tuple(map(float, e)) for e in raw["lower"]),
                        m=int(raw["m"]), n=int(raw["n"]))
    except (TypeError, ValueError, DomainError) as exc:
        _fail(1, f"invalid spec: {exc}")


@main.command()
@click.argument("spec_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--z", "zs", type=float, multiple=True, required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def foxh(spec_file, zs, out):
    """Evaluate a Fox H-function at each --z; one JSON record per point."""
    spec = _load_foxh_spec(spec_file)
    if any(z <= 0 for z in zs):
        _fail(1, "z must be positive")
    num, den = spec.factors()
    sep = min_family_separation(num, den)
    records = []
    for z in zs:
        try:
            if sep < 1e-6:
                value = hankel_loop(num, den, z)
                strategy = "HankelLoop"
            else:
                try:
                    value = residue_series(num, den, z)
                    strategy = "ResidueSum"
                except PoleCollisionError:
                    value = hankel_loop(num, den, z)
                    strategy = "HankelLoop"
        except NonConverged as exc:
            _fail(2, f"non-convergence at z={z}: {exc}")
        rec = {"z": z, "value": value, "strategy": strategy,
               "est_error": max(1e-13, 1e-11 * abs(value))}
        records.append(rec)
        click.echo(json.dumps(rec, sort_keys=True))
    if out:
        cfg = RunConfig("foxh", {"spec_file": spec_file, "z": list(zs)})
        with open(out, "w") as fh:
            json.dump({"config": cfg.as_dict(), "records": records}, fh,
                      sort_keys=True, indent=1)


# ---------------------------------------------------------------------------
# kernel-grid
# ---------------------------------------------------------------------------

_FINITE_KINDS = ("K00", "K01", "K10", "K11")
_HARD_KINDS = tuple("hard-" + k for k in _FINITE_KINDS)


@main.command("kernel-grid")
@click.option("--a", type=float, default=0.0)
@click.option("--b", type=float, default=0.0)
@click.option("--theta", type=float, default=1.0)
@click.option("--n", type=int, default=1)
@click.option("--kind", type=click.Choice(_FINITE_KINDS + _HARD_KINDS),
              default="K00")
@click.option("--grid-min", type=float, default=0.1)
@click.option("--grid-max", type=float, default=3.0)
@click.option("--grid-count", type=int, default=5)
@click.option("--grid-scale", type=click.Choice(["log", "linear"]),
              default="linear")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv")
def kernel_grid(a, b, theta, n, kind, grid_min, grid_max, grid_count,
                grid_scale, out, fmt):
    """Tabulate a kernel on a rectangular grid and write CSV or JSON."""
    if grid_count < 2:
        _fail(1, "grid count must be at least 2")
    if not 0 < grid_min < grid_max:
        _fail(1, "need 0 < grid-min < grid-max")
    if grid_scale == "log":
        axis = np.logspace(math.log10(grid_min), math.log10(grid_max),
                           grid_count)
    else:
        axis = np.linspace(grid_min, grid_max, grid_count)
    cfg = RunConfig("kernel-grid", {
        "a": a, "b": b, "theta": theta, "n": n, "kind": kind,
        "grid_min": grid_min, "grid_max": grid_max,
        "grid_count": grid_count, "grid_scale": grid_scale, "format": fmt,
    })
    try:
        if kind in _FINITE_KINDS:
            params = ensembles.EnsembleParams(a, b, theta, n)
            if kind == "K00":
                def ev(x, y):
                    return kernels.cd_kernel(params, x, y)
            else:
                fn = {"K01": kernels.k01, "K10": kernels.k10,
                      "K11": kernels.k11}[kind]

                def ev(x, y):
                    return fn(params, x, y)
        else:
            base = kind.split("-", 1)[1]

            def ev(x, y):
                return kernels.hard_edge_kernel(a, b, theta, base, x, y)
        grid = kernels.make_grid(kind, axis, axis, ev,
                                 params=cfg.as_dict())
    except NonConverged as exc:
        _fail(2, f"grid evaluation did not converge: {exc}")
    except CauchyBuresError as exc:
        _fail(1, str(exc))
    text = grid.to_csv() if fmt == "csv" else grid.to_json()
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _checks_numerics(rng, tol):
    m = rng.standard_normal((6, 6))
    skew = SkewMatrix(np.triu(m, 1))
    pf = pfaffian(skew).to_real()
    det = np.linalg.det(skew.entries)
    yield ("pfaffian_squared_equals_det", abs(pf * pf - det) / abs(det), tol)
    rule = gauss_jacobi(12, 0.7)
    exact = 1.0 / (0.7 + 6.0)  # integral of t^0.7 t^5 over (0,1)
    got = rule.integrate(lambda t: t ** 5)
    yield ("jacobi_weight_monomial", abs(got - exact) / exact, tol)


def _checks_ensembles(rng, tol):
    p = ensembles.EnsembleParams(0.0, 0.0, 1.0, 2)
    z2 = ensembles.partition_cauchy(p).to_real()
    yield ("cauchy_partition_n2_unit_params", abs(z2 - 1.0 / 12.0) * 12.0, tol)
    q = ensembles.EnsembleParams(0.4, 1.4, 1.3, 3)
    closed = ensembles.partition_cauchy(q)
    det = ensembles.partition_cauchy_det(q)
    yield ("cauchy_partition_closed_vs_det",
           abs(closed.to_real() / det.to_real() - 1.0), tol)
    r = ensembles.EnsembleParams(0.4, 1.4, 1.3, 3)
    pf_route = ensembles.partition_bures(r).to_real()
    ident = ensembles.partition_bures_squared_identity(r).to_real()
    yield ("bures_partition_pfaffian_vs_identity",
           abs(pf_route / ident - 1.0), tol)


def _checks_polynomials(rng, tol):
    p = ensembles.EnsembleParams(0.5, 0.7, 1.5, 6)
    for nn in range(3):
        for mm in range(3):
            ph = polynomials.p_hat(p, nn)
            qh = polynomials.q_hat(p, mm)
            acc = 0.0
            for l, cl in enumerate(ph.coeffs):
                for k, ck in enumerate(qh.coeffs):
                    acc += cl * ck * ensembles.moment_c(p, l + 1, k + 1)
            expect = (1.0 / (p.theta * 2 * nn + p.a + p.b + 1.0)
                      if nn == mm else 0.0)
            yield (f"biorthogonality_{nn}_{mm}", abs(acc - expect), tol)
    # the raw coefficient series sums to the Jacobi polynomial P_n^(alpha,0)
    for nn in range(5):
        for alpha in (0.0, 0.8):
            x = 0.37
            acc = sum(polynomials.coeff_c(nn, l, alpha) * x ** l
                      for l in range(nn + 1))
            jac = polynomials.jacobi_p(nn, alpha, x)
            yield (f"jacobi_series_{nn}_{alpha}", abs(acc - jac), tol)


def _checks_kernels(rng, tol):
    p = ensembles.EnsembleParams(0.5, 0.7, 1.5, 3)
    for x, y in ((0.4, 0.9), (1.3, 2.1)):
        s = kernels.cd_kernel(p, x, y, strategy="sum")
        d = kernels.cd_kernel(p, x, y, strategy="doublecontour")
        yield (f"cd_strategy_agreement_{x}_{y}", abs(s / d - 1.0), tol)
    for x, y in ((0.6, 1.1),):
        t1 = kernels.k01(p, x, y, route="tintegral")
        t2 = kernels.k01(p, x, y, route="direct")
        yield (f"k01_route_agreement_{x}_{y}", abs(t1 / t2 - 1.0), tol)


def _checks_correlations(rng, tol):
    p = ensembles.EnsembleParams(0.0, 0.0, 1.0, 1)
    req = correlations.CorrelationRequest("cauchy", p, (0.9,), ())
    prod = correlations.rho_cauchy(req)
    orac = correlations.brute_force_correlation(req)
    yield ("cauchy_rho10_vs_bruteforce", abs(prod / orac - 1.0), tol)
    pb = ensembles.EnsembleParams(0.0, 1.0, 1.0, 1)
    reqb = correlations.CorrelationRequest("bures", pb, (1.0,), ())
    prodb = correlations.rho_bures(reqb)
    oracb = correlations.brute_force_correlation(reqb)
    yield ("bures_rho1_vs_bruteforce", abs(prodb / oracb - 1.0), tol)


def _checks_raney(rng, tol):
    catalan = [1, 1, 2, 5, 14, 42]
    for nn, c in enumerate(catalan):
        yield (f"catalan_{nn}", abs(raney_number(2.0, 1.0, nn) - c), 1e-9)
    for nn in range(5):
        got = sz_moment(nn)
        expect = raney_number(1.5, 0.5, nn)
        yield (f"sz_moment_{nn}", abs(got - expect), tol)


_SUITES = {
    "numerics": _checks_numerics,
    "ensembles": _checks_ensembles,
    "polynomials": _checks_polynomials,
    "kernels": _checks_kernels,
    "correlations": _checks_correlations,
    "raney": _checks_raney,
}


@main.command()
@click.option("--suite", default="all")
@click.option("--seed", type=int, default=0)
@click.option("--tol", type=float, default=1e-6)
def verify(suite, seed, tol):
    """Run module invariant checks; JSON report, exit 3 on first failure."""
    if not 1e-14 <= tol <= 1e-2:
        _fail(1, "tolerance must lie in [1e-14, 1e-2]")
    if suite != "all" and suite not in _SUITES:
        _fail(1, f"unknown suite {suite!r}; choose from "
                 f"all|{'|'.join(_SUITES)}")
    names = list(_SUITES) if suite == "all" else [suite]
    rng = np.random.default_rng(seed)
    report = []
    for name in names:
        for check_name, measured, tolerance in _SUITES[name](rng, tol):
            status = "pass" if measured <= tolerance else "fail"
            report.append({"check_name": f"{name}.{check_name}",
                           "status": status, "measured": measured,
                           "tolerance": tolerance})
            if status == "fail":
                click.echo(json.dumps(report, indent=1))
                _fail(3, f"verification failed: {name}.{check_name}")
    click.echo(json.dumps(report, indent=1))


# ---------------------------------------------------------------------------
# partition / corr
# ---------------------------------------------------------------------------

def _print_value(label: str, value_log):
    click.echo(json.dumps({
        "quantity": label,
        "value": value_log.to_real(),
        "sign": value_log.sign,
        "log_abs": value_log.log_mag,
    }, sort_keys=True))


@main.command()
@click.option("--model", type=click.Choice(["cauchy", "bures"]),
              default="cauchy")
@click.option("--a", type=float, required=True)
@click.option("--b", type=float, default=None)
@click.option("--theta", type=float, default=1.0)
@click.option("--n", type=int, required=True)
def partition(model, a, b, theta, n):
    """Partition function, printed in linear and (sign, log) form."""
    try:
        if model == "cauchy":
            if b is None:
                _fail(1, "--b is required for the Cauchy model")
            p = ensembles.EnsembleParams(a, b, theta, n)
            _print_value("Z_cauchy", ensembles.partition_cauchy(p))
        else:
            p = ensembles.EnsembleParams(a, a + 1.0, theta, n)
            _print_value("Z_bures", ensembles.partition_bures(p))
    except CauchyBuresError as exc:
        _fail(1, str(exc))


@main.command()
@click.option("--model", type=click.Choice(["cauchy", "bures"]),
              required=True)
@click.option("--a", type=float, required=True)
@click.option("--b", type=float, default=None)
@click.option("--theta", type=float, default=1.0)
@click.option("--n", type=int, required=True)
@click.option("--x", "xs", type=float, multiple=True)
@click.option("--y", "ys", type=float, multiple=True)
@click.option("--z", "zs", type=float, multiple=True)
@click.option("--oracle", is_flag=True, default=False)
def corr(model, a, b, theta, n, xs, ys, zs, oracle):
    """Correlation function at the given points; --oracle adds brute force."""
    try:
        if model == "cauchy":
            if b is None:
                _fail(1, "--b is required for the Cauchy model")
            if zs:
                _fail(1, "use --x/--y for the Cauchy model")
            p = ensembles.EnsembleParams(a, b, theta, n)
            req = correlations.CorrelationRequest("cauchy", p, xs, ys)
            value = correlations.rho_cauchy(req)
        else:
            if xs or ys:
                _fail(1, "use --z for the Bures model")
            p = ensembles.EnsembleParams(a, a + 1.0, theta, n)
            req = correlations.CorrelationRequest("bures", p, zs)
            value = correlations.rho_bures(req)
        oracle_value = (correlations.brute_force_correlation(req)
                        if oracle else None)
    except NonConverged as exc:
        _fail(2, str(exc))
    except CauchyBuresError as exc:
        _fail(1, str(exc))
    click.echo(correlations.correlation_record(req, value, "direct",
                                               oracle_value))


if __name__ == "__main__":
    main()
