"""Command-line driver: ``fqgraph <command> [options]``.

Exit codes: 0 success, 1 golden-data mismatch, 2 configuration error,
3 mathematical degeneracy (zero normalizer or empty sphere).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from typing import Callable

import numpy as np

from . import __version__
from .averaging import (
    INF,
    TestFamily,
    estimate_averaging_norm,
    format_exponent,
    parse_exponents,
)
from .errors import ConfigError, DegeneracyError, FastPathUnavailable, FqGraphError
from .exponents import (
    certify_witness,
    compare_with_paper,
    constraint_system,
    enumerate_vertices,
    expected_implication,
    format_point,
    graph_pairs,
    implication_check,
    load_golden,
)
from .field import Field, make_field
from .forms import GraphSpec, basic_functions, estimate_form_norm, eval_form_fast, eval_form_generic
from .geometry import (
    grid_points,
    plane_sphere_count,
    plane_sphere_count_brute,
    sphere,
    sphere_sphere_count,
    sphere_sphere_count_brute,
)
from .graphs import GRAPH_NAMES, get_topology
from .spectral import decay_ratio, khat_l2_opnorm

EXIT_OK, EXIT_MISMATCH, EXIT_CONFIG, EXIT_DEGENERATE = 0, 1, 2, 3
AGREEMENT_TOL = 1e-9


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _parse_q_list(text: str) -> list[Field]:
    try:
        values = [int(s) for s in str(text).split(",") if s.strip()]
    except ValueError as exc:
        raise ConfigError(f"--q expects a comma-separated list of integers, got {text!r}") from exc
    if not values:
        raise ConfigError("--q is empty")
    return [make_field(q) for q in values]


def resolve_t_policy(policy: str | None, field: Field, d: int) -> list[int]:
    """``squares`` (nonzero squares), ``all`` (every nonzero t) or an explicit list.

    The default is ``squares`` at d = 2, where a nonsquare radius empties
    S_t^0 and zeroes the product normalizers, and ``all`` otherwise.
    """
    if policy is None:
        policy = "squares" if d == 2 else "all"
    text = str(policy).strip().lower()
    if text in ("squares", "squares-only"):
        return field.squares()
    if text in ("all", "all-nonzero"):
        return list(range(1, field.q))
    try:
        return [int(s) % field.q for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise ConfigError(f"--t must be 'squares', 'all' or a list of integers, got {policy!r}") from exc


def _graphs(args) -> list[str]:
    if args.all:
        return list(GRAPH_NAMES)
    if not args.graph:
        raise ConfigError("choose --graph NAME or --all")
    return [get_topology(args.graph).name]


def _single_graph(args) -> str:
    if args.all:
        raise ConfigError("this command takes a single --graph")
    return _graphs(args)[0]


def _single_t(args, field: Field) -> int:
    ts = resolve_t_policy(args.t, field, args.d)
    nonzero = [t for t in ts if t != 0]
    if not nonzero:
        raise ConfigError("this command needs a nonzero t")
    return nonzero[0]


def _build_input(kind: str, g: GraphSpec, rng: np.random.Generator) -> np.ndarray:
    base = basic_functions(g)
    kind = kind.strip().lower()
    if kind in base:
        return base[kind]
    if kind.startswith("random:"):
        try:
            rho = float(kind.split(":", 1)[1])
        except ValueError as exc:
            raise ConfigError(f"bad density in {kind!r}") from exc
        if not 0 < rho <= 1:
            raise ConfigError(f"density must lie in (0, 1], got {rho}")
        ind = (rng.random(g.shape) < rho).astype(np.int64)
        if not ind.any():
            ind[(0,) * g.d] = 1
        return ind
    raise ConfigError(f"unknown input {kind!r}; use delta, sphere, full or random:<density>")


# ---- commands -----------------------------------------------------------------


def cmd_spheres(args) -> tuple[list[dict], int]:
    rows = []
    for field in _parse_q_list(args.q):
        q, d = field.q, args.d
        for t in resolve_t_policy(args.t, field, d):
            s = sphere(field, d, t)
            row = {"q": q, "d": d, "t": t, "size": s.size,
                   "scan_agrees": bool(np.array_equal(s.points, sphere(field, d, t, "scan").points))}
            if d >= 2:
                spots = _spot_vectors(field, d)
                plane = [(m, b, plane_sphere_count(field, m, t, b), plane_sphere_count_brute(field, m, t, b))
                         for m in spots for b in range(q)]
                inter = [(m, j, sphere_sphere_count(field, m, t, j), sphere_sphere_count_brute(field, m, t, j))
                         for m in spots for j in range(q)]
                row["plane_counts"] = [{"m": list(m), "b": b, "formula": a, "brute": c} for m, b, a, c in plane]
                row["sphere_counts"] = [{"m": list(m), "j": j, "formula": a, "brute": c} for m, j, a, c in inter]
                row["oracle_agrees"] = all(a == c for *_, a, c in plane + inter)
            rows.append(row)
    return rows, EXIT_OK


def _spot_vectors(field: Field, d: int) -> list[tuple[int, ...]]:
    """e_1 and, when one exists, the first nonzero isotropic vector."""
    e1 = tuple([1] + [0] * (d - 1))
    out = [e1]
    for p in grid_points(field.q, d)[1:]:
        if int((p * p).sum()) % field.q == 0:
            out.append(tuple(int(x) for x in p))
            break
    return out


def cmd_eval(args) -> tuple[list[dict], int]:
    field = _parse_q_list(args.q)[0]
    name = _single_graph(args)
    g = GraphSpec(name, field, args.d, _single_t(args, field), args.mode)
    kinds = [s for s in (args.inputs or ",".join(["full"] * g.n)).split(",") if s.strip()]
    if len(kinds) != g.n:
        raise ConfigError(f"{name} needs {g.n} inputs, got {len(kinds)}")
    rng = np.random.default_rng(args.seed)
    fs = [_build_input(k, g, rng) for k in kinds]
    record = {"graph": name, "q": g.q, "d": g.d, "t": g.t, "mode": g.norm_mode.value,
              "inputs": kinds, "generic": None, "fast": None, "agree": None}
    if args.path in ("both", "generic"):
        record["generic"] = eval_form_generic(g, fs)
    if args.path in ("both", "fast"):
        try:
            record["fast"] = eval_form_fast(g, fs)
        except FastPathUnavailable as exc:
            record["fast_unavailable"] = str(exc)
    if record["generic"] is not None and record["fast"] is not None:
        a, b = record["generic"], record["fast"]
        record["agree"] = bool(abs(a - b) <= AGREEMENT_TOL * max(abs(a), abs(b), 1e-300))
    return [record], EXIT_OK


def cmd_sweep(args) -> tuple[list[dict], int]:
    if not args.exponents:
        raise ConfigError("sweep needs --exponents")
    ps = parse_exponents(args.exponents)
    family = TestFamily(seed=args.seed)
    rows = []
    averaging = (args.graph or "").upper() in ("A", "AVERAGING")
    for field in _parse_q_list(args.q):
        t = _single_t(args, field)
        if averaging:
            if len(ps) != 2:
                raise ConfigError("averaging sweeps take two exponents p,r")
            est = estimate_averaging_norm(field, args.d, t, ps[0], ps[1], family)
            label = "A"
        else:
            name = _single_graph(args)
            g = GraphSpec(name, field, args.d, t, args.mode)
            if len(ps) != g.n:
                raise ConfigError(f"{name} takes {g.n} exponents, got {len(ps)}")
            est = estimate_form_norm(g, ps, family)
            label = name
        rows.append({
            "operator": label, "q": field.q, "d": args.d, "t": t,
            "exponents": [format_exponent(p) for p in ps],
            "restricted_max": est.restricted_max, "restricted_witness": est.restricted_witness,
            "general_max": est.general_max, "general_witness": est.general_witness,
        })
    return rows, EXIT_OK


def cmd_vertices(args) -> tuple[list[dict], int]:
    rows, code = [], EXIT_OK
    golden = load_golden()
    for name in _graphs(args):
        if args.d == 2 and name in golden:
            report = compare_with_paper(name)
            row = report.to_dict()
            row["status"] = "MATCH" if report.match else "MISMATCH"
            row["vertices"] = [format_point(u) for u in report.computed]
            if not report.match:
                code = EXIT_MISMATCH
        else:
            verts = enumerate_vertices(constraint_system(name, args.d))
            row = {"graph": name, "d": args.d, "status": "COMPUTED", "computed_count": len(verts),
                   "vertices": [format_point(u) for u in verts]}
        rows.append(row)
    return rows, code


def cmd_implications(args) -> tuple[list[dict], int]:
    rows, code = [], EXIT_OK
    for a, b in graph_pairs():
        rep = implication_check(a, b, args.d)
        row = rep.to_dict()
        row["status"] = "CONTAINED" if rep.contained else "NOT-CONTAINED"
        exp = expected_implication(a, b) if args.d == 2 else None
        if exp is not None:
            row["expected"] = "CONTAINED" if exp.contained else "NOT-CONTAINED"
            row["expected_witness"] = format_point(exp.witness) if exp.witness else None
            row["agrees_with_expected"] = rep.contained == exp.contained and (
                exp.witness is None or certify_witness(exp.witness, a, b, args.d)
            )
            if not row["agrees_with_expected"]:
                code = EXIT_MISMATCH
        rows.append(row)
    return rows, code


def cmd_decay(args) -> tuple[list[dict], int]:
    rows = []
    for field in _parse_q_list(args.q):
        for t in resolve_t_policy(args.t, field, args.d):
            if t == 0:
                continue
            k = khat_l2_opnorm(field, args.d, t)
            rows.append({"q": field.q, "d": args.d, "t": t, "decay_ratio": decay_ratio(field, args.d, t),
                         "khat_l2_opnorm": k.l2_opnorm, "khat_sup_norm": k.sup_norm})
    return rows, EXIT_OK


COMMANDS: dict[str, Callable] = {
    "spheres": cmd_spheres,
    "eval": cmd_eval,
    "sweep": cmd_sweep,
    "vertices": cmd_vertices,
    "implications": cmd_implications,
    "decay": cmd_decay,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message, EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fqgraph", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"fqgraph {__version__}")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--q", default="5", help="comma-separated odd primes")
    parser.add_argument("--d", type=int, default=2)
    parser.add_argument("--t", default=None, help="squares | all | comma list (default: squares at d=2, else all)")
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--graph", default=None, help="K2 K3 P2 P3 C4 C4_DIAG KITE Y (sweep also accepts A)")
    group.add_argument("--all", action="store_true")
    parser.add_argument("--exponents", default=None, help="e.g. 3/2,3,3/2,inf")
    parser.add_argument("--inputs", default=None, help="eval inputs: delta|sphere|full|random:<density> per slot")
    parser.add_argument("--path", choices=("both", "fast", "generic"), default="both")
    parser.add_argument("--mode", choices=("paper", "embedding"), default="embedding")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", default=None)
    parser.add_argument("--timing", action="store_true", help="include wall time in the JSON payload")
    return parser


def _config_record(args) -> dict:
    return {k: getattr(args, k) for k in
            ("command", "q", "d", "t", "graph", "all", "exponents", "inputs", "path", "mode", "seed", "format")}


def _to_csv(rows: list[dict]) -> str:
    flat = []
    for row in rows:
        flat.append({k: (json.dumps(v, sort_keys=True) if isinstance(v, (list, dict)) else v) for k, v in row.items()})
    keys: list[str] = []
    for row in flat:
        keys.extend(k for k in row if k not in keys)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    writer.writeheader()
    writer.writerows(flat)
    return buf.getvalue()


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if obj == INF:
        return "inf"
    raise TypeError(f"not serializable: {type(obj).__name__}")


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    start = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        rows, code = COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=stderr)
        return exc.code
    except ConfigError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_CONFIG
    except DegeneracyError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_DEGENERATE
    except FqGraphError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_CONFIG
    elapsed = time.perf_counter() - start
    if args.format == "json":
        payload = {
            "tool": "fqgraph",
            "version": __version__,
            "command": args.command,
            "config": _config_record(args),
            "seed": args.seed,
            "exit_code": code,
            "results": rows,
        }
        if args.timing:
            payload["wall_time_s"] = elapsed
        text = json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n"
    else:
        text = _to_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    print(f"wall_time_s={elapsed:.3f}", file=stderr)
    return code


def main(argv: list[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
