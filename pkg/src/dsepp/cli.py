"""Command-line interface: compile, simulate, rates.

Exit codes: 0 success, 2 configuration error, 3 computation cap exceeded.
Errors go to stderr as one JSON object per failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._svg import line_chart
from .compiler import compile_circuit
from .decoder import generate_ml_decoder, table_513, table_713
from .rates import f_out_red, rate_sweep, write_rate_csv
from .scheduler import build_multigraph, chromatic_index
from .sim import NoiseModel, csv_header, csv_row, simulate_exact, simulate_mc, write_sim_csv
from .stabilizer import distance, parse_stabilizers, preset, standard_form

EXACT_CAP = 10


class ConfigError(Exception):
    exit_code = 2


class CapError(Exception):
    exit_code = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _fail(ConfigError(message))


def _fail(exc):
    sys.stderr.write(json.dumps({"error": str(exc), "code": exc.exit_code}) + "\n")
    raise SystemExit(exc.exit_code)


def _load_code(args):
    """Returns (name, tableau, declared distance or None)."""
    if args.preset and args.code:
        raise ConfigError("give either --preset or --code, not both")
    if args.preset:
        cp = preset(args.preset)
        return cp.name, cp.tableau, cp.d
    if args.code:
        path = Path(args.code)
        if not path.exists():
            raise ConfigError(f"code file not found: {path}")
        try:
            t = parse_stabilizers(path.read_text())
        except ValueError as e:
            raise ConfigError(f"invalid code file: {e}")
        return path.stem, t, None
    raise ConfigError("a code is required (--preset or --code)")


def _parse_values(spec: str, what: str) -> list[float]:
    """Comma list '0.1,0.2' or range 'lo:hi:count'."""
    try:
        if ":" in spec:
            lo, hi, count = spec.split(":")
            lo, hi, count = float(lo), float(hi), int(count)
            if count < 1:
                raise ValueError("count must be >= 1")
            return [float(v) for v in np.linspace(lo, hi, count)]
        return [float(v) for v in spec.split(",") if v.strip()]
    except ValueError as e:
        raise ConfigError(f"bad {what} value {spec!r}: {e}")


def _select_decoder(name, tableau, declared_d, circ, mode, p_prior):
    """Resolve the protocol mode and decoder for a code.

    Distance-2 codes run two-way (no decoder; passing 1epp is rejected);
    higher-distance codes run one-way with the built-in tables for the
    presets and a generated ML table otherwise.
    """
    if mode == "2epp":
        return None
    builtin = {"five_one_three": table_513, "steane": table_713}
    if mode == "auto":
        if name in builtin:
            return builtin[name]()
        if name.startswith("iceberg"):
            return None
        if tableau.n > 12:
            raise CapError("cannot infer protocol mode for n > 12; pass --mode")
        d = declared_d if declared_d is not None else distance(tableau)
        if d < 2:
            raise ConfigError(f"code has distance {d}; purification needs d >= 2")
        if d == 2:
            return None
        mode = "1epp"
    if name in builtin:
        return builtin[name]()
    if name.startswith("iceberg"):
        raise ConfigError("distance-2 codes are two-way; no decoder applies")
    try:
        return generate_ml_decoder(circ, p_prior=p_prior)
    except ValueError as e:
        raise CapError(str(e))


def _cmd_compile(args):
    name, tableau, _ = _load_code(args)
    sf = standard_form(tableau)
    circ = compile_circuit(sf)
    graph = build_multigraph(circ)
    layers = chromatic_index(graph, exact_limit=args.exact_limit)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "circuit.json").write_text(circ.to_json() + "\n")
    (outdir / "graph.dot").write_text(graph.to_dot())
    (outdir / "layers.json").write_text(layers.to_json() + "\n")
    print(f"n={circ.n} k={circ.k} cz={circ.cz_count} "
          f"layers={layers.num_layers} exact={str(layers.exact).lower()}")
    return 0


def _cmd_simulate(args):
    name, tableau, declared_d = _load_code(args)
    sf = standard_form(tableau)
    circ = compile_circuit(sf)
    decoder = _select_decoder(name, tableau, declared_d, circ, args.mode,
                              args.p_prior)

    ps = _parse_values(args.p, "--p")
    qs = _parse_values(args.q, "--q")
    for v, what in [(ps, "p"), (qs, "q")]:
        for x in v:
            if not 0.0 <= x <= 1.0:
                raise ConfigError(f"{what} value {x} out of [0, 1]")

    records = []
    for q in qs:
        for p in ps:
            exact_ok = q == 0.0 and circ.n <= EXACT_CAP
            if exact_ok:
                res = simulate_exact(circ, decoder, p, cap=EXACT_CAP)
            else:
                if args.shots is None:
                    if q > 0:
                        raise ConfigError("--shots is required when q > 0")
                    raise CapError(
                        f"n={circ.n} exceeds the exact enumeration cap "
                        f"({EXACT_CAP}); pass --shots/--seed for Monte Carlo")
                if args.seed is None:
                    raise ConfigError("--seed is required for Monte-Carlo runs")
                res = simulate_mc(circ, decoder, NoiseModel(p, q), args.shots,
                                  args.seed, threads=args.threads)
            records.append((p, q, res))

    out = sys.stdout if args.out is None else open(args.out, "w")
    try:
        if args.format == "json":
            header = csv_header(circ.k)
            rows = [dict(zip(header, csv_row(p, q, r, circ.k)))
                    for p, q, r in records]
            out.write(json.dumps(rows, indent=2) + "\n")
        else:
            write_sim_csv(out, records, circ.k)
    finally:
        if args.out is not None:
            out.close()
    return 0


def _cmd_rates(args):
    if not 0.0 < args.pmax <= 1.0:
        raise ConfigError(f"--pmax must be in (0, 1], got {args.pmax}")
    if args.points < 2:
        raise ConfigError("--points must be >= 2")
    ps = np.linspace(0.0, args.pmax, args.points)

    ls_ns = [4, 6]
    full_ns = [4]
    for n in args.n or []:
        if n % 2 != 0 or n < 4:
            raise ConfigError(f"--n must be even and >= 4, got {n}")
        if n > 10:
            raise CapError(f"rate enumeration capped at n <= 10, got {n}")
        if n not in ls_ns:
            ls_ns.append(n)
        if args.protocol in ("sh", "best", "all") and n not in full_ns:
            full_ns.append(n)

    curve = rate_sweep(ps, r_max=args.r_max, ls_ns=tuple(sorted(ls_ns)),
                       full_ns=tuple(sorted(full_ns)), threads=args.threads)

    out = sys.stdout if args.out is None else open(args.out, "w")
    try:
        if args.format == "svg":
            if args.plot == "fidelity":
                protos = ["input", "recurrence", "macchiavello2",
                          "iceberg4", "iceberg6"]
                series = {name: [f_out_red(name, p) for p in ps]
                          for name in protos}
                out.write(line_chart(ps, series, title="Reduced output fidelity",
                                     xlabel="p", ylabel="f_out_red"))
            else:
                series = {name: curve.columns[name] for name in curve.names()
                          if not name.startswith("r_")}
                out.write(line_chart(ps, series, title="Distillation rates",
                                     xlabel="p", ylabel="rate"))
        elif args.format == "json":
            doc = {"p": [float(v) for v in ps]}
            doc.update({name: [float(v) for v in col]
                        for name, col in curve.columns.items()})
            out.write(json.dumps(doc, indent=2) + "\n")
        else:
            write_rate_csv(out, curve)
    finally:
        if args.out is not None:
            out.close()
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="dsepp", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_code_args(p):
        p.add_argument("--preset", help="built-in code (icebergN, five_one_three, steane)")
        p.add_argument("--code", help="stabilizer file, one Pauli string per line")

    c = sub.add_parser("compile", help="compile a code and schedule its CZ layers")
    add_code_args(c)
    c.add_argument("--out", default=".", help="output directory")
    c.add_argument("--exact-limit", type=int, default=24,
                   help="edge budget for provably minimal scheduling")
    c.set_defaults(func=_cmd_compile)

    s = sub.add_parser("simulate", help="simulate the purification protocol")
    add_code_args(s)
    s.add_argument("--p", required=True, help="input noise: comma list or lo:hi:count")
    s.add_argument("--q", default="0", help="gate noise: comma list or lo:hi:count")
    s.add_argument("--shots", type=int, default=None)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--mode", choices=["auto", "1epp", "2epp"], default="auto")
    s.add_argument("--p-prior", type=float, default=0.01,
                   help="error prior for generated ML decoders")
    s.add_argument("--threads", type=int, default=None)
    s.add_argument("--out", default=None, help="output file (default stdout)")
    s.add_argument("--format", choices=["csv", "json"], default="csv")
    s.set_defaults(func=_cmd_simulate)

    r = sub.add_parser("rates", help="asymptotic distillation-rate curves")
    r.add_argument("--pmax", type=float, default=0.8)
    r.add_argument("--points", type=int, default=81)
    r.add_argument("--n", type=int, action="append",
                   help="extra code size column (repeatable)")
    r.add_argument("--protocol", choices=["ls", "sh", "best", "all"], default="all")
    r.add_argument("--r-max", type=int, default=20)
    r.add_argument("--threads", type=int, default=None)
    r.add_argument("--out", default=None)
    r.add_argument("--format", choices=["csv", "json", "svg"], default="csv")
    r.add_argument("--plot", choices=["rates", "fidelity"], default="rates")
    r.set_defaults(func=_cmd_rates)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, CapError) as e:
        _fail(e)
    except ValueError as e:
        _fail(ConfigError(str(e)))


if __name__ == "__main__":
    sys.exit(main())
