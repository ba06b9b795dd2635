"""Command-line front end.

    qherm spectrum --model morse-complex --A 3 --B 4 --C 2 --grid -4:16:2048:dirichlet
    qherm counterexample --max-n 32
    qherm probe --eta exp-p --theta 1 --sizes 64,128,256

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.
A config file (``--config FILE``) holds ``key = value`` lines; flags win.
"""
import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field, fields
from math import pi, sqrt
from typing import List, Optional

import numpy as np

from . import completion, metric, models, transform
from .discretize import Grid, window_vectors
from .errors import NonFiniteError, NumericalError
from .linalg import (eig_general, eig_hermitian, inverse_iteration,
                     multiset_distance)

COMMANDS = ("spectrum", "metric", "transform", "counterexample", "complete", "probe")
FORMATS = ("csv", "json")
PROBE_ETAS = ("exp-p", "resolvent", "identity")
METRIC_ETAS = ("exp-p", "gauge", "susy")

SCHEMAS = {
    "spectrum": ("index", "re", "im", "residual"),
    "counterexample": ("n", "m", "ambient_distance", "eta_distance"),
    "probe": ("size", "op_norm"),
    "metric": ("hermiticity_residual", "min_eigenvalue", "intertwining_residual", "op_norm",
               "intertwining_windowed"),
    "transform": ("check", "residual"),
    "complete": ("check", "residual"),
}

# eigenvectors (and so residuals) are computed up to this dimension
VECTOR_LIMIT = 1024


class ConfigError(ValueError):
    pass


def parse_grid(text):
    parts = str(text).split(":")
    if len(parts) != 4:
        raise ConfigError(f"grid: expected x_min:x_max:n:boundary, got {text!r}")
    try:
        x_min, x_max, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"grid: cannot parse {text!r}")
    try:
        return Grid(x_min, x_max, n, parts[3])
    except ValueError as exc:
        raise ConfigError(f"grid: {exc}")


def parse_sizes(text):
    try:
        sizes = [int(s) for s in str(text).split(",") if s.strip()]
    except ValueError:
        raise ConfigError(f"sizes: cannot parse {text!r}")
    if len(sizes) < 3 or any(b <= a for a, b in zip(sizes, sizes[1:])) or sizes[0] < 8:
        raise ConfigError("sizes: need at least three increasing integers >= 8")
    return sizes


def finite_float(text):
    value = float(text)
    if not np.isfinite(value):
        raise ValueError("not finite")
    return value


@dataclass
class RunConfig:
    command: str
    model: Optional[str] = None
    A: float = 3.0
    B: float = 4.0
    C: float = 2.0
    g: float = 0.5
    t: float = 1.0
    theta: Optional[float] = None
    k: float = 0.0
    x0: float = 0.0
    mass: float = 1.0
    phi_re: float = 0.0
    superpotential: str = "tanh"
    n_sites: int = 50
    grid: Optional[Grid] = None
    eta: Optional[str] = None
    sizes: List[int] = field(default_factory=lambda: [64, 128, 256])
    max_n: int = 32
    n_modes: int = 256
    p_min: float = 0.5
    p_max: float = 20.0
    trials: int = 100
    output: Optional[str] = None
    format: str = "csv"
    seed: int = 0

    def echo(self):
        out = asdict(self)
        if self.grid is not None:
            g = self.grid
            out["grid"] = f"{g.x_min!r}:{g.x_max!r}:{g.n_points}:{g.boundary}"
        return out


# key -> converter; also the set of accepted keys
_CONVERTERS = {
    "model": str, "A": finite_float, "B": finite_float, "C": finite_float,
    "g": finite_float, "t": finite_float, "theta": finite_float, "k": finite_float,
    "x0": finite_float, "mass": finite_float, "phi_re": finite_float,
    "superpotential": str, "n_sites": int, "grid": parse_grid, "eta": str,
    "sizes": parse_sizes, "max_n": int, "n_modes": int, "p_min": finite_float,
    "p_max": finite_float, "trials": int, "output": str, "format": str, "seed": int,
}


def _convert(key, raw):
    if key not in _CONVERTERS:
        raise ConfigError(f"unknown key {key!r}")
    try:
        return _CONVERTERS[key](raw)
    except ConfigError:
        raise
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: invalid value {raw!r}")


def read_config_file(path):
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, raw = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key == "command":
                values[key] = raw
                continue
            values[key] = _convert(key, raw)
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser():
    parser = _Parser(prog="qherm", description="Non-Hermitian spectral laboratory.")
    parser.add_argument("command", nargs="?", choices=COMMANDS)
    parser.add_argument("--config", dest="config_file")
    for key in _CONVERTERS:
        flag = "--" + key.replace("_", "-")
        parser.add_argument(flag, dest=key, default=argparse.SUPPRESS)
    return parser


def _join_negative_values(argv):
    # "--grid -4:16:..." would be read as an option; fold it into "--grid=-4:16:..."
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok.startswith("--") and "=" not in tok and i + 1 < len(argv) \
                and argv[i + 1].startswith("-") and len(argv[i + 1]) > 1 \
                and (argv[i + 1][1].isdigit() or argv[i + 1][1] == "."):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def parse_config(argv):
    """Build a :class:`RunConfig` from flags and an optional config file.

    Raises :class:`ConfigError` naming the offending key.
    """
    argv = list(argv)
    if not argv:
        raise ConfigError("no command given")
    ns = build_parser().parse_args(_join_negative_values(argv))
    values = {}
    if ns.config_file:
        try:
            values.update(read_config_file(ns.config_file))
        except OSError as exc:
            raise ConfigError(f"config: cannot read {ns.config_file}: {exc.strerror}")
    for key in _CONVERTERS:
        if hasattr(ns, key):
            values[key] = _convert(key, getattr(ns, key))
    command = ns.command or values.pop("command", None)
    values.pop("command", None)
    if command not in COMMANDS:
        raise ConfigError(f"command: expected one of {', '.join(COMMANDS)}")
    config = RunConfig(command=command, **values)
    _validate(config)
    return config


def _validate(config):
    if config.format not in FORMATS:
        raise ConfigError(f"format: expected csv or json, got {config.format!r}")
    if config.model is not None and config.model not in models.CATALOG:
        raise ConfigError(f"model: unknown model {config.model!r}")
    if config.command in ("spectrum", "metric", "transform", "complete") and config.model is None:
        raise ConfigError(f"model: required for {config.command}")
    if config.command == "probe" and (config.eta or "exp-p") not in PROBE_ETAS:
        raise ConfigError(f"eta: expected one of {', '.join(PROBE_ETAS)}")
    if config.command == "metric" and config.eta is not None and config.eta not in METRIC_ETAS:
        raise ConfigError(f"eta: expected one of {', '.join(METRIC_ETAS)}")
    if config.superpotential not in ("tanh", "linear", "const"):
        raise ConfigError(f"superpotential: unknown {config.superpotential!r}")
    for key in ("max_n", "n_sites", "trials"):
        if getattr(config, key) < 1:
            raise ConfigError(f"{key}: must be positive")
    if config.mass <= 0:
        raise ConfigError("mass: must be positive")


# model construction --------------------------------------------------------

def _default_grid(config, periodic=False):
    if config.grid is not None:
        return config.grid
    if config.model in ("morse-complex", "morse-real"):
        return Grid(-4.0, 16.0, 128, "periodic") if periodic else models.default_morse_grid()
    return Grid(-10.0, 10.0, 256, "periodic")


def _morse(config):
    try:
        return models.MorseParams(config.A, config.B, config.C)
    except ValueError as exc:
        raise ConfigError(f"A: {exc}")


def _gauge(config):
    g, re = config.g, config.phi_re
    return models.GaugeField(lambda x: np.full(np.shape(x), re - 1j * g), config.x0, config.mass)


def _gauge_potential(x):
    return np.asarray(x, dtype=float) ** 2


def _susy(config):
    return models.susy_catalog(config.superpotential, config.g, config.k)


def build_hamiltonian(config, grid=None):
    m = config.model
    if m == "hatano-nelson":
        return models.hatano_nelson_chain(config.n_sites, config.t, config.g)
    grid = grid or _default_grid(config)
    if m == "morse-complex":
        return models.complex_morse(grid, _morse(config))
    if m == "morse-real":
        return models.real_morse(grid, _morse(config))
    if m == "gauge":
        return models.gauged_hamiltonian(grid, _gauge(config), _gauge_potential)
    return models.susy_hamiltonian(grid, _susy(config))


# commands -------------------------------------------------------------------

def cmd_spectrum(config):
    H = build_hamiltonian(config).matrix
    vectors = H.shape[0] <= VECTOR_LIMIT
    if config.model == "morse-real":
        spec = eig_hermitian(H, vectors=vectors)
    else:
        spec = eig_general(H, vectors=vectors)
    rows = []
    for j, lam in enumerate(spec.eigenvalues):
        res = float(spec.residuals[j]) if spec.residuals is not None else float("nan")
        rows.append({"index": j, "re": float(np.real(lam)), "im": float(np.imag(lam)),
                     "residual": res})
    return rows, {}


def cmd_metric(config):
    m = config.model
    eta_name = config.eta or {"morse-complex": "exp-p", "morse-real": "exp-p",
                              "gauge": "gauge", "susy": "susy"}.get(m)
    if eta_name is None:
        raise ConfigError(f"eta: no metric family for model {m!r}")
    if eta_name == "exp-p":
        grid = _default_grid(config, periodic=True)
        if grid.boundary != "periodic":
            raise ConfigError("grid: exp(-theta p) needs a periodic grid")
        theta = config.theta if config.theta is not None else _morse(config).theta
        eta = metric.eta_exp_p(grid, theta)
    elif eta_name == "gauge":
        grid = _default_grid(config)
        eta = metric.eta_gauge(grid, _gauge(config))
    else:
        grid = _default_grid(config)
        eta = metric.eta_susy(grid, _susy(config))
    H = build_hamiltonian(config, grid)
    if H.basis != eta.basis or H.matrix.shape != eta.matrix.shape:
        raise ConfigError(f"model: {m!r} has no grid-based metric")
    return [metric.diagnose(eta, H).as_record()], {}


def _checks(pairs):
    return [{"check": k, "residual": float(v)} for k, v in pairs]


def cmd_transform(config):
    m = config.model
    if m in ("morse-complex", "morse-real"):
        params = _morse(config)
        grid = _default_grid(config)
        x = np.linspace(grid.x_min, grid.x_max, 1000)
        out = [("scalar_law", transform.morse_scalar_law(params, x)),
               ("real_shift_law", transform.morse_real_shift_law(params, x))]
        Hc = models.complex_morse(grid, params).matrix
        Hr = models.real_morse(grid, params).matrix
        wc = eig_general(Hc).eigenvalues
        wr = eig_hermitian(Hr, vectors=False).eigenvalues
        bc = np.sort(wc[models.bound_states(wc)].real)
        br = np.sort(wr[models.bound_states(wr)])
        if bc.size != br.size or bc.size == 0:
            raise NumericalError(
                f"bound-state count mismatch: complex {bc.size}, real {br.size}")
        out.append(("bound_state_match", float(np.max(np.abs(bc - br) / np.abs(br)))))
        return _checks(out), {}
    if m == "hatano-nelson":
        H = models.hatano_nelson_chain(config.n_sites, config.t, config.g)
        pair = transform.hatano_nelson_gauge(config.n_sites, config.g)
        Hh = transform.apply_similarity(pair, H)
        w = eig_general(H.matrix).eigenvalues
        w0 = eig_general(models.hatano_nelson_chain(config.n_sites, config.t, 0.0).matrix).eigenvalues
        exact = models.open_chain_energies(config.n_sites, config.t)
        return _checks([("gauge_hermiticity", transform.hermiticity_residual(Hh)),
                        ("g_independence", multiset_distance(w, w0)),
                        ("open_chain_match", multiset_distance(w, exact))]), {}
    if m == "gauge":
        grid = _default_grid(config)
        gauge = _gauge(config)
        T_g, T_u = transform.gauge_factorize(grid, gauge)
        H = models.gauged_hamiltonian(grid, gauge, _gauge_potential)
        Hh = transform.apply_similarity(T_g.compose(T_u), H)
        return _checks([("t_g_unitarity", transform.unitarity_residual(T_g)),
                        ("hhat_windowed_hermiticity",
                         transform.windowed_hermiticity(Hh, window_vectors(grid)))]), {}
    checks = transform.susy_checks(config.n_modes, config.p_min, config.p_max, _susy(config))
    return _checks(checks.items()), {}


def cmd_counterexample(config):
    rows = []
    for n in range(1, config.max_n + 1):
        for m in range(n + 1, config.max_n + 1):
            amb, eta = completion.counterexample_sequence(n, m)
            rows.append({"n": n, "m": m, "ambient_distance": amb, "eta_distance": eta})
    return rows, {}


def cmd_complete(config):
    m = config.model
    H = build_hamiltonian(config)
    A = H.matrix
    if m == "hatano-nelson":
        eigs = completion.EigenSet.from_spectrum(eig_general(A, vectors=True))
    elif m in ("morse-complex", "morse-real"):
        w = eig_general(A).eigenvalues
        bound = w[models.bound_states(w)]
        if bound.size == 0:
            raise NumericalError("no bound states found")
        eigs = completion.EigenSet.from_spectrum(inverse_iteration(A, bound))
    else:
        raise ConfigError(f"model: complete supports morse-complex, morse-real, hatano-nelson")
    H_hat, diag_res = completion.hermitize(H, eigs)
    rng = np.random.default_rng(config.seed)
    asym = completion.verify_hermitian_in_v(H, eigs, config.trials, rng)
    rows = _checks([("diag_residual", diag_res),
                    ("hhat_hermiticity", transform.hermiticity_residual(H_hat)),
                    ("verify_asymmetry", asym),
                    ("gram_condition", eigs.gram_condition)])
    rows += _checks((f"energy_{j}", e) for j, e in enumerate(eigs.E))
    return rows, {}


def cmd_probe(config):
    eta = config.eta or "exp-p"
    theta = 1.0 if config.theta is None else config.theta
    lo, hi = (config.grid.x_min, config.grid.x_max) if config.grid else (-pi, pi)
    family = {"exp-p": lambda: metric.exp_p_family(theta, lo, hi),
              "resolvent": lambda: metric.resolvent_family(lo, hi),
              "identity": lambda: metric.identity_family(lo, hi)}[eta]()
    report = metric.boundedness_probe(family, config.sizes, metric.probe_threads())
    rows = [{"size": s, "op_norm": v} for s, v in zip(report.truncation_sizes, report.norms)]
    return rows, {"classification": report.classification}


HANDLERS = {
    "spectrum": cmd_spectrum, "metric": cmd_metric, "transform": cmd_transform,
    "counterexample": cmd_counterexample, "complete": cmd_complete, "probe": cmd_probe,
}


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render(config, rows, extra):
    if config.format == "json":
        doc = {"config": config.echo(), "results": rows}
        doc.update(extra)
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = SCHEMAS[config.command]
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row[h]) for h in header])
    return buf.getvalue()


def run(config, stdout=None, stderr=None):
    """Execute one command; returns the process exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        rows, extra = HANDLERS[config.command](config)
    except ConfigError as exc:
        print(f"qherm: invalid configuration: {exc}", file=stderr)
        return 2
    except (NumericalError, NonFiniteError, np.linalg.LinAlgError, FloatingPointError,
            OverflowError) as exc:
        print(f"qherm: numerical failure: {exc}", file=stderr)
        return 3
    except ValueError as exc:
        print(f"qherm: invalid configuration: {exc}", file=stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - the CLI never crashes on numerics
        print(f"qherm: numerical failure: {type(exc).__name__}: {exc}", file=stderr)
        return 3
    text = render(config, rows, extra)
    if config.output:
        with open(config.output, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if "classification" in extra:
        print(f"qherm: classification {extra['classification']} (heuristic)", file=stderr)
    return 0


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
    except ConfigError as exc:
        print(build_parser().format_usage().rstrip(), file=sys.stderr)
        print(f"qherm: invalid configuration: {exc}", file=sys.stderr)
        return 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
