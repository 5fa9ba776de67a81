"""Command-line front end.

Every subcommand takes its parameters from flags and/or a flat
``key = value`` config file (flags win).  Results go to stdout (or
``--output``) as CSV with a header row, or as JSON with ``--json``.
Floats are written with 17 significant digits so reruns diff exactly.

Exit codes: 0 success, 2 usage or invalid parameter, 3 numerical or
conditioning failure, 4 precision target missed.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import InvalidParameterError, NBLabError, PrecisionError

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_PRECISION = 0, 2, 3, 4


class ConfigError(Exception):
    """Bad key, bad value or violated constraint; names the offending key."""

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


# ----------------------------------------------------------------------------
# value converters: str -> python value, and back to a canonical string


def _num(text):
    x = float(text)
    if not math.isfinite(x):
        raise ValueError("must be finite")
    return x


def _int(text):
    x = float(text)
    if not x.is_integer():
        raise ValueError("must be an integer")
    return int(x)


def _posint(text):
    x = _int(text)
    if x < 1:
        raise ValueError("must be a positive integer")
    return x


def _list(conv):
    def parse(text):
        items = [s for s in str(text).replace(" ", "").split(",") if s]
        if not items:
            raise ValueError("must be a non-empty comma-separated list")
        return [conv(s) for s in items]

    return parse


def _complex(text):
    z = complex(text.replace("i", "j"))
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("must be finite")
    return z


def _grid(text):
    parts = str(text).split(":")
    if len(parts) != 3:
        raise ValueError("expected a:b:steps")
    a, b, steps = _num(parts[0]), _num(parts[1]), _posint(parts[2])
    return (a, b, steps)


def _zeros(text):
    parts = str(text).split("..")
    if len(parts) != 2:
        raise ValueError("expected k1..k2")
    k1, k2 = _posint(parts[0]), _posint(parts[1])
    if k2 < k1:
        raise ValueError("k2 must be >= k1")
    return (k1, k2)


def _choice(*options):
    def parse(text):
        if text not in options:
            raise ValueError(f"must be one of {', '.join(options)}")
        return text

    return parse


def _bool(text):
    low = str(text).lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError("must be true or false")


def _fmt(x):
    """Canonical text of a config value (re-parses to the same value)."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, complex):
        return repr(x).strip("()")
    if isinstance(x, tuple) and len(x) == 3:
        return f"{_fmt(x[0])}:{_fmt(x[1])}:{x[2]}"
    if isinstance(x, tuple) and len(x) == 2:
        return f"{x[0]}..{x[1]}"
    if isinstance(x, list):
        return ",".join(_fmt(v) for v in x)
    return str(x)


@dataclass(frozen=True)
class Param:
    conv: object
    default: object = None
    help: str = ""


PARAMS = {
    "q": Param(_posint, 1, "modulus of the character"),
    "char-index": Param(_int, 0, "character index (0 = principal)"),
    "p": Param(_num, 2.0, "exponent p in (1, 2]"),
    "n": Param(_posint, None, "degree / number of dilates"),
    "sigma": Param(_num, 0.5, "real part of s"),
    "t": Param(_list(_num), None, "imaginary part(s) of s"),
    "grid": Param(_grid, None, "grid a:b:steps"),
    "x": Param(_list(_num), None, "evaluation point(s), x > 0"),
    "scan": Param(_num, None, "scan the running supremum up to this x"),
    "tol": Param(_num, 1e-10, "absolute accuracy target for L-values"),
    "eps": Param(_num, 1e-4, "integration cutoff (divided by k per frequency)"),
    "support": Param(_choice("unit", "half_line"), "unit", "integration range (0,1) or (0,inf)"),
    "sweep": Param(_bool, False, "emit every leading dimension 1..n"),
    "coeffs": Param(_list(_complex), None, "coefficients b_1..b_n"),
    "T": Param(_num, 500.0, "frequency cutoff |t| <= T"),
    "u": Param(_num, None, "first kernel argument"),
    "v": Param(_num, None, "second kernel argument (defaults to u)"),
    "n-list": Param(_list(_posint), None, "comma-separated degrees"),
    "nodes": Param(_list(_num), None, "interpolation nodes t_1,...,t_m"),
    "zeros": Param(_zeros, None, "range k1..k2 of zeta-zero indices used as nodes"),
    "coefficients": Param(str, None, "write coefficient CSV to this path"),
    "format": Param(_choice("csv", "json"), "csv", "output format"),
    "output": Param(str, None, "output path (default stdout)"),
}

COMMON = ("format", "output")
COMMANDS = {
    "chars": ("q",),
    "lfun": ("q", "char-index", "sigma", "t", "grid", "tol"),
    "kappa": ("q", "char-index", "p", "x", "scan"),
    "bd-distance": ("q", "char-index", "p", "n", "eps", "support", "sweep"),
    "plancherel-check": ("q", "char-index", "p", "coeffs", "T", "eps"),
    "kernel": ("p", "n", "u", "v"),
    "kernel-scan": ("p", "u", "n-list"),
    "extremal": ("p", "n", "nodes", "coefficients"),
    "extremal-sweep": ("p", "nodes", "n-list"),
    "compare": ("n", "zeros", "grid"),
}
COMMAND_HELP = {
    "chars": "list the Dirichlet characters mod q",
    "lfun": "evaluate L(s, chi) with an error bound",
    "kappa": "evaluate kappa or its running supremum",
    "bd-distance": "Baez-Duarte distance d_n^2",
    "plancherel-check": "time versus frequency objective for coefficients b",
    "kernel": "reproducing kernel K_n(u, v)",
    "kernel-scan": "diagonal kernel against its log n leading term",
    "extremal": "minimum-norm interpolating polynomial",
    "extremal-sweep": "d^2 log n along a list of degrees",
    "compare": "mollifier versus extremal polynomial on the critical line",
}
REQUIRED = {
    "kappa": (("x", "scan"),),
    "lfun": (("t", "grid"),),
    "bd-distance": ("n",),
    "plancherel-check": ("coeffs",),
    "kernel": ("n", "u"),
    "kernel-scan": ("u", "n-list"),
    "extremal": ("n", "nodes"),
    "extremal-sweep": ("nodes", "n-list"),
    "compare": ("n", "zeros", "grid"),
}
# per-command defaults that differ from the global table
OVERRIDES = {"plancherel-check": {"eps": 1e-5}}
BD_MAX_N = 64


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)

    def to_text(self):
        lines = [f"command = {self.command}"]
        for key in sorted(self.params):
            val = self.params[key]
            if val is not None:
                lines.append(f"{key} = {_fmt(val)}")
        return "\n".join(lines) + "\n"


def read_config_file(path):
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}", "expected key = value")
            key, val = (s.strip() for s in line.split("=", 1))
            out[key] = val
    return out


def _validate(command, params):
    from .arith import totient

    def need(key, ok, message):
        if params.get(key) is not None and not ok(params[key]):
            raise ConfigError(key, message)

    need("p", lambda p: 1.0 < p <= 2.0, "p must lie in (1, 2]")
    need("q", lambda q: q <= 10**6, "q exceeds the supported limit 1e6")
    if "char-index" in params and params.get("q") is not None:
        phi = totient(params["q"])
        need("char-index", lambda i: 0 <= i < phi, f"must lie in [0, {phi - 1}] for q={params['q']}")
    need("x", lambda xs: all(x > 0 for x in xs), "kappa is defined for x > 0")
    need("scan", lambda x: x >= 1, "scan limit must be >= 1")
    need("eps", lambda e: 0 < e < 1, "eps must lie in (0, 1)")
    need("T", lambda t: t > 0, "T must be positive")
    need("tol", lambda t: t > 0, "tol must be positive")
    need("grid", lambda g: g[2] >= 1, "steps must be >= 1")
    if command == "bd-distance":
        need("n", lambda n: n <= BD_MAX_N, f"n above the cap {BD_MAX_N} (Gram matrices are too ill-conditioned)")
    if command == "plancherel-check":
        need("coeffs", lambda c: len(c) <= BD_MAX_N, f"at most {BD_MAX_N} coefficients")
    if command in ("kernel", "kernel-scan"):
        need("n", lambda n: n <= 10**8, "n above the streaming limit 1e8")
        need("n-list", lambda ns: max(ns) <= 10**8, "n above the streaming limit 1e8")

    def distinct(nodes):
        a = np.sort(np.asarray(nodes))
        return bool(np.all(np.diff(a) > 1e-9))

    need("nodes", distinct, "nodes must be pairwise distinct")


def parse_config(argv):
    """Resolve flags, config file and defaults into a validated :class:`RunConfig`."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    command = ns.command
    allowed = set(COMMANDS[command]) | set(COMMON)
    raw = {}
    if ns.config:
        try:
            file_vals = read_config_file(ns.config)
        except OSError as exc:
            raise ConfigError("config", str(exc)) from exc
        file_cmd = file_vals.pop("command", command)
        if file_cmd != command:
            raise ConfigError("command", f"config file is for {file_cmd!r}, not {command!r}")
        for key in file_vals:
            if key not in allowed:
                raise ConfigError(key, f"unknown key for command {command!r}")
        raw.update(file_vals)
    for key in allowed:
        val = getattr(ns, key.replace("-", "_"), None)
        if val is not None:
            raw[key] = val
    params = {}
    defaults = OVERRIDES.get(command, {})
    for key in sorted(allowed):
        spec = PARAMS[key]
        if key in raw:
            try:
                params[key] = spec.conv(raw[key])
            except (TypeError, ValueError) as exc:
                raise ConfigError(key, f"invalid value {raw[key]!r}: {exc}") from exc
        else:
            params[key] = defaults.get(key, spec.default)
    for req in REQUIRED.get(command, ()):
        if isinstance(req, tuple):
            if all(params.get(k) is None for k in req):
                raise ConfigError(req[0], f"one of {', '.join(req)} is required")
        elif params.get(req) is None:
            raise ConfigError(req, "is required")
    _validate(command, params)
    return RunConfig(command, params), ns.print_config


def build_parser():
    parser = argparse.ArgumentParser(prog="nblab", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"nblab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command",
                                help=", ".join(COMMANDS))
    for command, keys in COMMANDS.items():
        sp = sub.add_parser(command, help=COMMAND_HELP[command])
        sp.add_argument("--config", help="flat key = value file (flags override it)")
        sp.add_argument("--print-config", action="store_true", help="print the resolved config and exit")
        fmt = sp.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="format", action="store_const", const="json")
        fmt.add_argument("--csv", dest="format", action="store_const", const="csv")
        sp.add_argument("--output", help=PARAMS["output"].help)
        for key in keys:
            sp.add_argument(f"--{key}", dest=key.replace("-", "_"), help=PARAMS[key].help)
    return parser


# ----------------------------------------------------------------------------
# emission


def _num_text(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _json_text(obj):
    """JSON with floats at 17 significant digits (non-finite as null)."""
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_text(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_json_text(v) for v in obj) + "]"
    if isinstance(obj, (complex, np.complexfloating)):
        return _json_text([obj.real, obj.imag])
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    x = float(obj)
    return _num_text(x) if math.isfinite(x) else "null"


@dataclass
class Table:
    columns: list
    rows: list
    extra: dict = field(default_factory=dict)


def _csv_text(table):
    buf = io.StringIO()
    buf.write(",".join(table.columns) + "\n")
    for row in table.rows:
        buf.write(",".join(_num_text(x) for x in row) + "\n")
    return buf.getvalue()


def _payload(config, table):
    out = {"schema_version": SCHEMA_VERSION, "command": config.command,
           "config": {k: _fmt(v) for k, v in sorted(config.params.items()) if v is not None},
           "columns": table.columns,
           "rows": [dict(zip(table.columns, row)) for row in table.rows]}
    out.update(table.extra)
    return _json_text(out) + "\n"


# ----------------------------------------------------------------------------
# commands


def _char(P):
    from .arith import character

    return character(P["q"], P["char-index"])


def _grid_points(g):
    a, b, steps = g
    return np.linspace(a, b, steps)


def _cmd_chars(P):
    from .arith import characters_mod

    rows = []
    for chi in characters_mod(P["q"]):
        vals = chi.values
        for k in range(1, chi.modulus + 1):
            z = vals[k - 1]
            rows.append((chi.index, chi.is_principal, chi.is_real, k, z.real, z.imag))
    return Table(["index", "principal", "real", "k", "re", "im"], rows)


def _cmd_lfun(P):
    from .lfun import l_eval_with_bound

    chi = _char(P)
    t = np.asarray(P["t"] if P["t"] is not None else _grid_points(P["grid"]), dtype=float)
    vals, bound = l_eval_with_bound(chi, P["sigma"] + 1j * t)
    vals, bound = np.atleast_1d(vals), np.broadcast_to(bound, t.shape)
    if np.any(bound > P["tol"]):
        raise PrecisionError(f"L-value accuracy target {P['tol']:g} missed", float(np.max(bound)))
    rows = [(P["sigma"], ti, z.real, z.imag, b) for ti, z, b in zip(t, vals, bound)]
    return Table(["sigma", "t", "re", "im", "bound"], rows)


def _cmd_kappa(P):
    from .kappa import kappa_build, kappa_eval, kappa_scan

    K = kappa_build(_char(P), P["p"])
    if P["scan"] is not None:
        return Table(["x", "sup_abs_kappa"], kappa_scan(K, P["scan"]))
    x = np.asarray(P["x"], dtype=float)
    vals = np.atleast_1d(kappa_eval(K, x))
    return Table(["x", "re", "im"], [(a, z.real, z.imag) for a, z in zip(x, vals)],
                 {"alpha": K.alpha, "beta": K.beta})


def _cmd_bd(P):
    from .bd import build_gram, distance_from_gram
    from .kappa import kappa_build

    K = kappa_build(_char(P), P["p"])
    gram = build_gram(K, P["n"], eps=P["eps"], support=P["support"])
    dims = range(1, P["n"] + 1) if P["sweep"] else [P["n"]]
    rows = []
    for m in dims:
        res = distance_from_gram(gram.leading(m))
        rows.append((m, res.d2, res.cond_estimate, res.tail_bound))
    return Table(["n", "d2", "cond", "tail"], rows)


def _cmd_plancherel(P):
    from .bd import plancherel_check

    res = plancherel_check(_char(P), P["p"], np.asarray(P["coeffs"], dtype=complex), P["T"],
                           eps=P["eps"])
    return Table(["time_value", "freq_value", "discrepancy"], [tuple(res)])


def _cmd_kernel(P):
    from .ortho import kernel_eval

    v = P["u"] if P["v"] is None else P["v"]
    z = kernel_eval(P["p"], P["n"], P["u"], v)
    return Table(["n", "u", "v", "re", "im"], [(P["n"], P["u"], v, z.real, z.imag)])


def _cmd_kernel_scan(P):
    from .ortho import kernel_scan

    rows = [(n, z.real, r) for n, z, r in kernel_scan(P["p"], P["u"], P["n-list"])]
    return Table(["n", "K_n", "ratio"], rows)


def _write_coefficients(path, sol):
    lines = ["k,psi_re,psi_im,mono_re,mono_im"]
    for k, (b, c) in enumerate(zip(sol.psi_coeffs, sol.mono_coeffs), 1):
        lines.append(",".join([str(k)] + [_num_text(x) for x in (b.real, b.imag, c.real, c.imag)]))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _cmd_extremal(P):
    from .extremal import solve_problem2

    sol = solve_problem2(P["p"], P["n"], P["nodes"])
    if P["coefficients"]:
        _write_coefficients(P["coefficients"], sol)
    row = (sol.n, sol.d2, sol.predicted, sol.ratio, float(sol.residuals.max()), sol.cond)
    return Table(["n", "d2", "predicted", "ratio", "residual_max", "cond"], [row],
                 {"d2": sol.d2, "psi_coeffs": sol.psi_coeffs, "mono_coeffs": sol.mono_coeffs})


def _cmd_extremal_sweep(P):
    from .extremal import asymptotic_table

    tab = asymptotic_table(P["p"], P["nodes"], P["n-list"])
    return Table(["n", "d2", "d2_log_n", "ratio"], tab.rows,
                 {"fit": {"slope": tab.slope, "intercept": tab.intercept,
                          "extrapolated_ratio": tab.extrapolated_ratio, "target": tab.target}})


def _cmd_compare(P):
    from .extremal import BCF_CONSTANT, REFERENCE_NOTES, compare_mollifier, zero_nodes

    nodes = zero_nodes(*P["zeros"])
    res = compare_mollifier(P["n"], nodes, _grid_points(P["grid"]))
    return Table(["t", "mollifier_abs", "extremal_abs"], res.rows,
                 {"correlation": res.correlation, "nodes": list(nodes),
                  "reference": {"bcf_constant": BCF_CONSTANT, **REFERENCE_NOTES}})


HANDLERS = {
    "chars": _cmd_chars, "lfun": _cmd_lfun, "kappa": _cmd_kappa, "bd-distance": _cmd_bd,
    "plancherel-check": _cmd_plancherel, "kernel": _cmd_kernel, "kernel-scan": _cmd_kernel_scan,
    "extremal": _cmd_extremal, "extremal-sweep": _cmd_extremal_sweep, "compare": _cmd_compare,
}


def run(config, stdout=None, stderr=None):
    """Execute a validated config; returns the process exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    P = config.params
    try:
        table = HANDLERS[config.command](P)
    except PrecisionError as exc:
        print(f"nblab: precision: {exc}", file=stderr)
        return EXIT_PRECISION
    except InvalidParameterError as exc:
        print(f"nblab: invalid parameter: {exc}", file=stderr)
        return EXIT_USAGE
    except (NBLabError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"nblab: numerical failure: {exc}", file=stderr)
        return EXIT_NUMERIC
    text = _payload(config, table) if P["format"] == "json" else _csv_text(table)
    if P["format"] == "csv":
        for key, val in table.extra.items():
            if key in ("correlation", "fit"):
                print(f"# {key}: {_json_text(val)}", file=stderr)
    if P["output"]:
        with open(P["output"], "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        config, print_only = parse_config(argv)
    except ConfigError as exc:
        print(f"nblab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse usage errors and --help
        return int(exc.code or 0)
    if print_only:
        sys.stdout.write(config.to_text())
        return EXIT_OK
    return run(config)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
