"""Command line interface.

Subcommands
-----------
xn      phase shifts and cross sections for n identical point centers
yxn     the same for a central atom with n satellite centers
silane  SiH4 preset: dressed symmetric channel with minimum report
dress   dressed potentials and chain phases for one partial wave
verify  analytic-versus-numerical consistency suites
fit     derivative-free parameter recovery from a measured curve

All tables are written with 9 significant digits, as CSV by default or
as a JSON mirror with ``--format json``; ``--plot`` renders a PNG next
to the table.  Exit codes: 0 success, 2 invalid usage or input, 3
verification or fit failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import pathlib
import sys
from dataclasses import dataclass, field

import numpy as np

from .darboux import (
    DressingChain,
    PropFamily,
    PropFunction,
    chain_phase,
    channel_props,
    crum_wronskian,
    dressed_boundary_logderiv,
    dressed_potential,
    renormalized_length,
    riccati_residual,
    write_potential_csv,
)
from .gzrp import GzrpChannel, gzrp_phase, pole_product_s_matrix
from .model import (
    EnergyGrid,
    FitFailure,
    NoMinimumError,
    SilaneModel,
    find_rt_minimum,
    fit_parameters,
    load_dataset,
    sigma_a1_scan,
)
from .multicenter import (
    CrossSectionSeries,
    XnGeometry,
    YxnGeometry,
    build_series,
    determinant_oracle,
    xn_length_formula,
    xn_phases,
    yxn_phases,
)
from .numerov import RadialProblem, integrate_phase
from .specfun import SphericalKind, spherical
from .units import BOHR2_TO_ANG2, ev_to_k


class CliError(ValueError):
    """Invalid option combination or input file; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    """Everything one invocation needs, JSON round-trippable.

    Rebuilding a RunConfig from its own JSON and running it again must
    produce byte-identical table output.
    """

    command: str
    params: dict = field(default_factory=dict)
    output: str | None = None
    fmt: str = "csv"
    plot: bool = False
    ang2: bool = False

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls(**json.loads(text))


# ---------------------------------------------------------------------------
# shared helpers


def _unit_of(name: str) -> str:
    if name == "E_eV":
        return "eV"
    if name == "k_au":
        return "1/a0"
    if name.startswith("delta"):
        return "rad"
    if name.startswith("sigma"):
        return "a0^2"
    if name == "r":
        return "a0"
    if name == "u":
        return "hartree"
    return ""


def _round9(x) -> float:
    return float(f"{float(x):.9g}")


def _grid_from_params(params: dict) -> EnergyGrid:
    emin, emax = params["emin"], params["emax"]
    if params.get("log"):
        return EnergyGrid.logarithmic(emin, emax, int(params.get("count") or 200))
    if params.get("count"):
        return EnergyGrid.linear(emin, emax, count=int(params["count"]))
    return EnergyGrid.linear(emin, emax, step=params["step"])


def _resolve_output(config: RunConfig, stem: str) -> pathlib.Path | None:
    """Target path for the main table; None means stdout."""
    if config.output == "-":
        return None
    if config.output:
        return pathlib.Path(config.output)
    ext = "json" if config.fmt == "json" else "csv"
    return pathlib.Path(f"{stem}.{ext}")


def _columns_payload(cols, nrows: int) -> dict:
    return {
        "columns": [name for name, _ in cols],
        "units": {name: _unit_of(name) for name, _ in cols},
        "rows": [
            [_round9(values[i]) for _, values in cols] for i in range(nrows)
        ],
    }


def _write_columns(cols, nrows: int, path: pathlib.Path | None, fmt: str) -> None:
    if fmt == "json":
        text = json.dumps(
            _columns_payload(cols, nrows), sort_keys=True, separators=(",", ":")
        )
        if path is None:
            print(text)
        else:
            path.write_text(text + "\n", encoding="ascii")
        return
    lines = [",".join(name for name, _ in cols)]
    for i in range(nrows):
        lines.append(",".join(f"{values[i]:.9g}" for _, values in cols))
    if path is None:
        print("\n".join(lines))
    else:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")


def _emit_series(
    series: CrossSectionSeries, config: RunConfig, stem: str
) -> pathlib.Path | None:
    path = _resolve_output(config, stem)
    _write_columns(series.columns(), series.e_ev.size, path, config.fmt)
    if path is not None:
        names = ", ".join(f"{n} [{_unit_of(n)}]" for n, _ in series.columns())
        print(f"wrote {path} ({series.e_ev.size} rows: {names})")
    if config.plot:
        from . import report

        fig_path = (path or pathlib.Path(stem)).with_suffix(".png")
        report.render_series_figure(series, fig_path, ang2=config.ang2)
        print(f"wrote {fig_path}")
    return path


def _sigma_summary(value: float, ang2: bool) -> str:
    text = f"{value:.9g} a0^2"
    if ang2:
        text += f" ({value * BOHR2_TO_ANG2:.9g} Angstrom^2)"
    return text


# ---------------------------------------------------------------------------
# subcommand runners


def _run_xn(config: RunConfig) -> int:
    p = config.params
    geom = XnGeometry(n=p["n"], R=p["R"], a=p["a"])
    if p.get("length_only"):
        A = xn_length_formula(geom.n, geom.a, geom.R)
        print(f"A = {A:.9g} a0")
        print(f"sigma(k->0) = {_sigma_summary(4.0 * math.pi * A * A, config.ang2)}")
        return 0
    series = build_series(geom, _grid_from_params(p).k)
    _emit_series(series, config, "xn")
    return 0


def _run_yxn(config: RunConfig) -> int:
    p = config.params
    geom = YxnGeometry(n=p["n"], R=p["R"], D=p["D"], a_x=p["a_x"], a_y=p["a_y"])
    series = build_series(geom, _grid_from_params(p).k)
    _emit_series(series, config, "yxn")
    return 0


def _run_silane(config: RunConfig) -> int:
    p = config.params
    model = SilaneModel(
        a_x=p["a_x"], a_y=p["a_y"], R=p["R"], D=p["D"], kappa=p["kappa"]
    )
    series = sigma_a1_scan(model, _grid_from_params(p))
    _emit_series(series, config, "silane")
    search = series
    if p.get("total"):
        search = dataclasses.replace(series, extras={})
    try:
        e_min, s_min = find_rt_minimum(search)
    except NoMinimumError as exc:
        print(f"RT-minimum: none found ({exc})")
        return 0
    label = "total" if p.get("total") else "dressed A1"
    print(
        f"RT-minimum: E={e_min:.9g} eV sigma={_sigma_summary(s_min, config.ang2)}"
        f" [{label}]"
    )
    defect = model.geometry_defect()
    print(f"geometry: R = {model.R:.9g} a0, tetrahedral defect {defect:.3g}")
    return 0


def _run_dress(config: RunConfig) -> int:
    p = config.params
    channel = GzrpChannel(l=p["l"], alpha=p["alpha"])
    chain = DressingChain(kappas=tuple(p["kappas"]))
    grid = _grid_from_params(p)
    ks = grid.k

    bare = np.array([gzrp_phase(channel, k).delta for k in ks])
    dressed = np.array([chain_phase(channel, chain, k).delta for k in ks])
    cols = [
        ("E_eV", grid.e_ev),
        ("k_au", ks),
        ("delta_bare", bare),
        ("delta_dressed", dressed),
    ]
    path = _resolve_output(config, "dress")
    _write_columns(cols, ks.size, path, config.fmt)
    if path is not None:
        print(f"wrote {path} ({ks.size} rows: phases in rad, k in 1/a0)")

    stem = path if path is not None else pathlib.Path("dress")
    r = np.linspace(p["rmin"], p["rmax"], p["rcount"])
    for m, kappa in enumerate(chain.kappas):
        prop = PropFunction(family=PropFamily.COSH_OVER_R, kappa=kappa)
        u = dressed_potential(prop, r)
        pot_path = stem.with_name(f"{stem.stem}_potential_{m}.csv")
        write_potential_csv(pot_path, r, u)
        print(
            f"wrote {pot_path} (kappa={kappa:.9g} 1/a0, "
            f"u(r) in hartree, r in a0)"
        )
        if config.plot:
            from . import report

            fig_path = pot_path.with_suffix(".png")
            report.render_potential_figure(
                r, u, fig_path, label=f"kappa={kappa:.9g}"
            )
            print(f"wrote {fig_path}")

    if channel.l == 0 and channel.alpha != 0.0:
        A = 1.0 / channel.alpha
        print(f"bare length A = {A:.9g} a0")
        for kappa in chain.kappas:
            A = renormalized_length(A, kappa)
            print(f"after kappa={kappa:.9g}: A = {A:.9g} a0")
    return 0


def _run_fit(config: RunConfig) -> int:
    p = config.params
    dataset = load_dataset(p["data"])
    base = SilaneModel(
        a_x=p["a_x"], a_y=p["a_y"], R=p["R"], D=p["D"], kappa=p["kappa"]
    )
    free = tuple(p["free"])
    result = fit_parameters(
        dataset, free=free, base=base, seed=p["seed"], restarts=p["restarts"]
    )
    print(f"fit: residual={result.residual:.9g} (free: {', '.join(free)}; "
          f"seed {p['seed']}, {p['restarts']} restarts)")
    units = {"a_x": "a0", "a_y": "a0", "kappa": "1/a0"}
    for name in free:
        value = getattr(result.model, name)
        print(f"  {name} = {value:.9g} {units[name]}")

    path = _resolve_output(config, "fit")
    payload = {
        "free": list(free),
        "params": {name: _round9(getattr(result.model, name)) for name in free},
        "residual": _round9(result.residual),
        "seed": p["seed"],
        "units": units,
    }
    if config.fmt == "json" or path is None or path.suffix == ".json":
        text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        if path is None:
            print(text)
        else:
            path.write_text(text + "\n", encoding="ascii")
            print(f"wrote {path}")
    else:
        cols = [(name, np.array([payload["params"][name]])) for name in free]
        cols.append(("residual", np.array([result.residual])))
        _write_columns(cols, 1, path, "csv")
        print(f"wrote {path}")

    if config.plot:
        from . import report
        from .model import _sigma_a1_at

        e_model = np.linspace(dataset.e_ev[0], dataset.e_ev[-1], 400)
        sigma_model = _sigma_a1_at(result.model, e_model)
        fig_path = (path or pathlib.Path("fit")).with_suffix(".png")
        report.render_fit_figure(
            dataset, e_model, sigma_model, fig_path, ang2=config.ang2
        )
        print(f"wrote {fig_path}")
    return 0


# ---------------------------------------------------------------------------
# verify suites


def _tan_mismatch(got: list, want: list) -> float:
    """Worst scaled difference between two sorted tangent sets."""
    if len(got) != len(want):
        return math.inf
    worst = 0.0
    for g, w in zip(sorted(got), sorted(want)):
        worst = max(worst, abs(g - w) / max(1.0, abs(w)))
    return worst


def _suite_pencil(draws: int, rng: np.random.Generator):
    """Closed-form tangents against the determinant oracle."""
    worst_x = 0.0
    worst_y = 0.0
    for _ in range(draws):
        n = int(rng.integers(2, 5))
        R = float(rng.uniform(1.0, 6.0))
        a = float(rng.uniform(0.3, 4.0))
        k = float(rng.uniform(0.05, 1.5))
        geom = XnGeometry(n=n, R=R, a=a)
        d0, d1 = xn_phases(geom, k)
        channels = determinant_oracle(geom, k)
        worst_x = max(worst_x, _tan_mismatch(
            [math.tan(c.delta) for c in channels],
            [math.tan(d) for d in (d0, d1)],
        ))

        a_y = float(rng.uniform(0.3, 4.0))
        if n == 4:
            D = R * math.sqrt(6.0) / 4.0
        else:
            rho = R / 2.0 if n == 2 else R / math.sqrt(3.0)
            D = float(rho * rng.uniform(1.1, 2.5))
        ygeom = YxnGeometry(n=n, R=R, D=D, a_x=a, a_y=a_y)
        yd = yxn_phases(ygeom, k)
        ychan = determinant_oracle(ygeom, k)
        worst_y = max(worst_y, _tan_mismatch(
            [math.tan(c.delta) for c in ychan],
            [math.tan(d) for d in yd],
        ))
    return [
        ("pencil-xn", worst_x, 1e-8, f"{draws} draws"),
        ("pencil-yxn", worst_y, 1e-8, f"{draws} draws"),
    ]


def _suite_numerov(draws: int, rng: np.random.Generator):
    """Integrated phases for the sech^2 tail against the arctan sum."""
    del rng
    worst = 0.0
    pairs = ((1.0, 0.185), (2.0, 0.5), (0.5, 1.0))
    ks = np.linspace(0.05, 1.0, max(3, min(draws, 8)))
    for alpha, kappa in pairs:
        def tail(r, kappa=kappa):
            return -(kappa**2) / np.cosh(kappa * r) ** 2

        for k in ks:
            problem = RadialProblem(
                l=0,
                k=float(k),
                potential=tail,
                inner_logderiv=dressed_boundary_logderiv(float(k), kappa, alpha),
                r0=1e-4,
                r_match=min(25.0 / kappa, 50.0),
                h=1e-3,
            )
            got = integrate_phase(problem).delta
            want = -math.atan(k / alpha) - math.atan(k / kappa)
            diff = abs(got - want)
            worst = max(worst, min(diff, abs(diff - math.pi), abs(diff - 2 * math.pi)))
    return [("numerov-sech2", worst, 1e-3, f"{3 * ks.size} integrations")]


def _suite_identities(draws: int, rng: np.random.Generator):
    """Riccati, Wronskian, pole-product and recurrence residuals."""
    kappa = 0.185
    r = np.linspace(0.1, 20.0, 600)
    ric = riccati_residual(
        lambda rr: kappa * math.tanh(kappa * rr) - 1.0 / rr,
        l=0,
        k0=kappa**2,
        grid=r,
        s_prime=lambda rr: kappa**2 / math.cosh(kappa * rr) ** 2 + 1.0 / rr**2,
    )

    wron = 0.0
    for l in (1, 2):
        props = channel_props(GzrpChannel(l=l, alpha=1.0))
        samples = np.array(
            [crum_wronskian(props, rr) for rr in np.linspace(0.5, 5.0, 25)]
        )
        scale = np.mean(np.abs(samples))
        wron = max(wron, float(np.ptp(np.abs(samples)) / scale))
        wron = max(wron, float(np.max(np.abs(samples - samples[0])) / scale))

    pole = 0.0
    for l in range(4):
        for _ in range(draws):
            alpha = float(rng.uniform(0.3, 3.0)) * (1 if rng.random() < 0.5 else -1)
            k = float(rng.uniform(0.05, 2.0))
            chan = GzrpChannel(l=l, alpha=alpha)
            pole = max(
                pole, abs(pole_product_s_matrix(chan, k) - chan.s_matrix(k))
            )

    rec = 0.0
    for kind in (SphericalKind.J, SphericalKind.N):
        for x in rng.uniform(0.5, 40.0, size=draws):
            f = [spherical(kind, l, float(x)) for l in range(7)]
            for l in range(1, 6):
                lhs = f[l + 1] + f[l - 1]
                rhs = (2 * l + 1) / x * f[l]
                rec = max(rec, abs(lhs - rhs) / max(1.0, abs(rhs)))

    return [
        ("riccati-sech2", ric, 1e-10, "r in [0.1, 20]"),
        ("wronskian-constancy", wron, 1e-6, "l in {1, 2}"),
        ("pole-product", pole, 1e-10, "l <= 3"),
        ("recurrence", rec, 1e-10, f"{draws} points"),
    ]


_SUITES = {
    "pencil": _suite_pencil,
    "numerov": _suite_numerov,
    "identities": _suite_identities,
}


def _run_verify(config: RunConfig) -> int:
    p = config.params
    names = list(_SUITES) if p["suite"] == "all" else [p["suite"]]
    rng = np.random.default_rng(p["seed"])
    failures = 0
    for name in names:
        for label, value, tol, note in _SUITES[name](p["draws"], rng):
            ok = value <= tol
            failures += 0 if ok else 1
            status = "PASS" if ok else "FAIL"
            print(f"{status} {label}: residual={value:.3e} tol={tol:.0e} ({note})")
    if failures:
        print(f"verify: {failures} check(s) failed")
        return 3
    print("verify: all checks passed")
    return 0


_RUNNERS = {
    "xn": _run_xn,
    "yxn": _run_yxn,
    "silane": _run_silane,
    "dress": _run_dress,
    "verify": _run_verify,
    "fit": _run_fit,
}


def run(config: RunConfig) -> int:
    """Execute a RunConfig; raises CliError for bad inputs."""
    if config.command not in _RUNNERS:
        raise CliError(f"unknown command {config.command!r}")
    if config.fmt not in ("csv", "json"):
        raise CliError(f"unknown format {config.fmt!r}")
    return _RUNNERS[config.command](config)


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("-o", "--output", default=None, metavar="PATH",
                     help="output table path ('-' for stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv",
                     help="table format (default csv)")
    sub.add_argument("--plot", action="store_true",
                     help="also render a PNG figure next to the table")
    sub.add_argument("--ang2", action="store_true",
                     help="report summary cross sections in Angstrom^2 too")


def _add_grid(sub: argparse.ArgumentParser, emin: float, emax: float,
              step: float) -> None:
    sub.add_argument("--emin", type=float, default=emin,
                     help=f"lowest energy in eV (default {emin})")
    sub.add_argument("--emax", type=float, default=emax,
                     help=f"highest energy in eV (default {emax})")
    sub.add_argument("--step", type=float, default=step,
                     help=f"energy step in eV (default {step})")
    sub.add_argument("--count", type=int, default=None,
                     help="number of points (overrides --step)")
    sub.add_argument("--log", action="store_true",
                     help="logarithmic energy grid (uses --count)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zrpdress",
        description="dressed zero-range-potential scattering toolkit "
        "(atomic units: lengths a0, energies hartree/eV)",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    xn = subs.add_parser("xn", help="n identical centers on a symmetric frame")
    xn.add_argument("--n", type=int, default=4, choices=(2, 3, 4),
                    help="number of centers (default 4)")
    xn.add_argument("--R", type=float, default=2.0,
                    help="nearest-neighbor distance in a0 (default 2)")
    xn.add_argument("--a", type=float, default=1.0,
                    help="single-center scattering length in a0 (default 1)")
    xn.add_argument("--length-only", action="store_true",
                    help="print the zero-energy scattering length and exit")
    _add_grid(xn, 0.01, 1.0, 0.001)
    _add_common(xn)

    yxn = subs.add_parser("yxn", help="central atom with n satellites")
    yxn.add_argument("--n", type=int, default=4, choices=(2, 3, 4),
                     help="number of satellites (default 4)")
    yxn.add_argument("--R", type=float, default=4.51,
                     help="satellite-satellite distance in a0")
    yxn.add_argument("--D", type=float, default=2.762,
                     help="center-satellite distance in a0")
    yxn.add_argument("--ax", dest="a_x", type=float, default=4.10,
                     help="satellite scattering length in a0")
    yxn.add_argument("--ay", dest="a_y", type=float, default=1.88,
                     help="central scattering length in a0")
    _add_grid(yxn, 0.01, 1.0, 0.001)
    _add_common(yxn)

    silane = subs.add_parser(
        "silane", help="SiH4 preset with the dressed symmetric channel"
    )
    silane.add_argument("--ax", dest="a_x", type=float, default=4.10,
                        help="hydrogen scattering length in a0 (default 4.10)")
    silane.add_argument("--ay", dest="a_y", type=float, default=1.88,
                        help="silicon scattering length in a0 (default 1.88)")
    silane.add_argument("--R", type=float, default=4.51,
                        help="H-H distance in a0 (default 4.51)")
    silane.add_argument("--D", type=float, default=2.762,
                        help="Si-H distance in a0 (default 2.762)")
    silane.add_argument("--kappa", type=float, default=0.185,
                        help="dressing decay constant in 1/a0 (default 0.185)")
    silane.add_argument("--total", action="store_true",
                        help="search the minimum of the full total instead "
                        "of the dressed symmetric channel")
    _add_grid(silane, 0.01, 1.0, 0.001)
    _add_common(silane)

    dress = subs.add_parser(
        "dress", help="dress one partial-wave channel with a kappa chain"
    )
    dress.add_argument("--l", type=int, default=0,
                       help="partial wave (default 0)")
    dress.add_argument("--alpha", type=float, default=1.0,
                       help="channel parameter in a0^-(2l+1) (default 1)")
    dress.add_argument("--kappas", type=str, default="0.185",
                       help="comma-separated decay constants in 1/a0")
    dress.add_argument("--rmin", type=float, default=0.05,
                       help="first potential sample in a0 (default 0.05)")
    dress.add_argument("--rmax", type=float, default=20.0,
                       help="last potential sample in a0 (default 20)")
    dress.add_argument("--rcount", type=int, default=400,
                       help="number of potential samples (default 400)")
    _add_grid(dress, 0.01, 1.0, 0.001)
    _add_common(dress)

    verify = subs.add_parser(
        "verify", help="run analytic-versus-numerical consistency suites"
    )
    verify.add_argument("--suite", choices=("all",) + tuple(_SUITES),
                        default="all", help="which suite to run (default all)")
    verify.add_argument("--draws", type=int, default=50,
                        help="random draws per suite (default 50)")
    verify.add_argument("--seed", type=int, default=0,
                        help="RNG seed (default 0)")
    _add_common(verify)

    fit = subs.add_parser("fit", help="fit model parameters to a measured curve")
    fit.add_argument("--data", required=True, metavar="PATH",
                     help="CSV with header E_eV,sigma[,sigma_err]")
    fit.add_argument("--free", type=str, default="a_x,a_y,kappa",
                     help="comma-separated free parameters "
                     "(subset of a_x,a_y,kappa)")
    fit.add_argument("--seed", type=int, default=0,
                     help="RNG seed for restarts (default 0)")
    fit.add_argument("--restarts", type=int, default=10,
                     help="random restarts (default 10)")
    fit.add_argument("--ax", dest="a_x", type=float, default=4.10,
                     help="starting a_x in a0")
    fit.add_argument("--ay", dest="a_y", type=float, default=1.88,
                     help="starting a_y in a0")
    fit.add_argument("--R", type=float, default=4.51,
                     help="fixed R in a0")
    fit.add_argument("--D", type=float, default=2.762,
                     help="fixed D in a0")
    fit.add_argument("--kappa", type=float, default=0.185,
                     help="starting kappa in 1/a0")
    _add_common(fit)

    return parser


def _parse_float_list(text: str, what: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise CliError(f"could not parse {what}: {text!r}") from exc
    if not values:
        raise CliError(f"{what} must contain at least one value")
    return values


_GRID_KEYS = ("emin", "emax", "step", "count", "log")


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Collect parsed arguments into a serializable RunConfig."""
    ns = vars(args)
    skip = {"command", "output", "format", "plot", "ang2"}
    params = {key: ns[key] for key in ns if key not in skip}
    if args.command == "dress":
        params["kappas"] = list(_parse_float_list(ns["kappas"], "--kappas"))
    if args.command == "fit":
        names = tuple(
            part.strip() for part in ns["free"].split(",") if part.strip()
        )
        if not names:
            raise CliError("--free must name at least one parameter")
        params["free"] = list(names)
    return RunConfig(
        command=args.command,
        params=params,
        output=args.output,
        fmt=args.format,
        plot=args.plot,
        ang2=args.ang2,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        return run(config)
    except FitFailure as exc:
        print(f"fit failed: {exc}", file=sys.stderr)
        return 3
    except (CliError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
