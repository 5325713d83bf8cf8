"""Command-line front end. Every run prints one canonical JSON report on
standard output and exits 0 (pass), 1 (a checked property failed) or 2
(bad input, usage or resource bound)."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import bounds_explorer as bx
from . import factorial_coloring as fc
from . import hamel_coloring as hc
from . import pair_coding as pc
from . import reflection_coloring as rc
from .errors import AntisymError, InputError, ResourceError, SoundnessError
from .foundations import format_rational, parse_rational

EXIT = {"pass": 0, "fail": 1, "error": 2}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


# -- artifacts ----------------------------------------------------------------

def load_points(path: str | Path) -> list[Fraction]:
    """One rational per line, in file order; blank lines are skipped."""
    out: list[Fraction] = []
    seen: dict[Fraction, int] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    for no, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            x = parse_rational(line)
        except InputError as exc:
            raise InputError(f"{path}:{no}: {exc}") from None
        if x in seen:
            raise InputError(f"{path}:{no}: duplicate point {format_rational(x)} (first on line {seen[x]})")
        seen[x] = no
        out.append(x)
    return out


def _canonical(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, dict):
        return {str(k): _canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    return obj


def dumps_report(report: dict) -> str:
    return json.dumps(_canonical(report), sort_keys=True, indent=2) + "\n"


def save_report(report: dict, path: str | Path) -> None:
    Path(path).write_text(dumps_report(report))


def threads() -> int:
    raw = os.environ.get("ANTISYM_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"ANTISYM_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise InputError(f"ANTISYM_THREADS must be a positive integer, got {raw!r}")
    return n


# -- subcommands ----------------------------------------------------------------
# each returns (status, certificate)

def _thm1(a) -> tuple[str, dict]:
    if a.points:
        points = load_points(a.points)
        source = {"file": str(a.points)}
    else:
        if a.random < 1:
            raise InputError("--random needs a positive size")
        points = rc.random_points(random.Random(a.seed), a.random)
        source = {"random": a.random, "seed": a.seed}
    system = rc.build_system(points)
    problems = rc.check_system(system)
    try:
        col = rc.color(system)
        bipartite = True
    except SoundnessError as exc:
        return "fail", {"source": source, "problems": problems, "bipartite": False, "error": str(exc)}
    violations = rc.verify_antisymmetric(points, col.f, col.d)
    if a.system_out:
        Path(a.system_out).write_text(json.dumps(system.to_json(), sort_keys=True, indent=2) + "\n")
    cert = {
        "source": source,
        "points": len(points),
        "intervals": len(system.intervals),
        "stage_sizes": list(system.stage_sizes),
        "problems": problems,
        "bipartite": bipartite,
        "violations": [v.to_json() for v in violations],
        "coloring": col.report(points),
    }
    return ("pass" if not problems and not violations else "fail"), cert


def _thm2(a) -> tuple[str, dict]:
    if not 1 <= a.size <= a.max_size:
        raise ResourceError(f"--size must be in 1..{a.max_size}")
    ctx = pc.build_context(a.size)
    if a.exhaustive:
        rep = pc.exhaustive_check(ctx)
        return ("pass" if rep.ok else "fail"), rep.to_json()
    problems = pc.check_conditions(ctx)
    checked, failures = pc.crossed_quadruples(ctx)
    cert = {
        "M": a.size,
        "conditions": {"problems": problems},
        "crossed_quadruples": {"quadruples_checked": checked, "failures": failures},
        "context": ctx.to_json(),
    }
    return ("pass" if not problems and not failures else "fail"), cert


def _coeff_list(text: str) -> list[Fraction]:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise InputError("--coeffs needs at least one rational")
    return [parse_rational(p) for p in parts]


def _thm3(a) -> tuple[str, dict]:
    coeffs = _coeff_list(a.coeffs)
    if a.dims < 1:
        raise InputError("--dims must be positive")
    windows = []
    if a.random:
        rng = random.Random(a.seed)
        for _ in range(a.random):
            windows.append(hc.random_window(rng, a.dims, a.window_size, coeffs))
    else:
        if len(coeffs) + 1 > 1 and (len(coeffs) + 1) ** a.dims > 20000:
            raise ResourceError("grid window too large; use --random")
        windows.append(hc.grid_window(a.dims, coeffs))
    ctx = pc.build_context(a.dims)
    reports = [hc.check_window(W, ctx, max_witnesses=a.witnesses) for W in windows]
    cert = {
        "dims": a.dims,
        "coeffs": coeffs,
        "mode": {"random": a.random, "seed": a.seed, "window_size": a.window_size} if a.random else "grid",
        "max": max(r.max_count for r in reports),
        "windows": [r.to_json() for r in reports],
    }
    return ("pass" if all(r.ok for r in reports) else "fail"), cert


def _thm6(a) -> tuple[str, dict]:
    if a.action == "color":
        x = parse_rational(a.x)
        cert = {"x": x, "color": fc.color_q(x), "level": fc.level(abs(x)) if x else None}
        return "pass", cert
    if a.action == "sx":
        cert = fc.s_x_window(parse_rational(a.x), parse_rational(a.max_h), a.max_den)
        bound = 2 * fc.level_size(cert.level + 1) if cert.level and cert.level < 20 else None
        status = "fail" if bound is not None and len(cert.violations) > bound else "pass"
        return status, cert.to_json()
    n = a.n
    graph = fc.edges_in_slice(n, bound=a.max_level)
    parts = fc.bipartition(graph)
    same = fc.same_level_check(n, bound=a.max_level)
    both = fc.color_array(graph.src, graph.denominator) == fc.color_array(graph.dst, graph.denominator)
    cert = {
        "n": n,
        "vertices": int(graph.vertices.size),
        "edges": graph.edge_count,
        "components": parts.components,
        "odd_edges": parts.odd_edges,
        "cross_level": same.violations,
        "monochromatic_edges": int(both.sum()),
    }
    ok = parts.bipartite and not same.violations and not both.any()
    return ("pass" if ok else "fail"), cert


def _pattern(a) -> tuple[str, dict]:
    pat = bx.decomposition_pattern(a.n)
    cert = pat.to_json()
    ok = pat.distinct() == 2 ** a.n - 1 == len(pat.pairs) and pat.unions_constant()
    if a.vectors:
        vp = bx.instantiate_vectors(pat)
        cert["vectors"] = vp.to_json()
        ok = ok and vp.distinct() == 2 ** a.n - 1 and vp.sums_equal()
    return ("pass" if ok else "fail"), cert


def _ramsey(a) -> tuple[str, dict]:
    if not 1 <= a.m <= bx.MAX_CHAIN:
        raise ResourceError(f"--m must be in 1..{bx.MAX_CHAIN}")
    if a.exhaustive:
        return "pass", bx.ramsey_scan(a.m, a.colors, a.chain).to_json()
    rng = random.Random(a.seed)
    colors = [rng.randint(1, a.colors) for _ in range(a.m * (a.m - 1) // 2)]
    dc = bx.DifferenceColoring.from_sequence(a.m, a.colors, colors)
    found = bx.find_monochromatic_chain(dc, a.chain)
    cert = {"seed": a.seed, "coloring": dc.to_json(), "chain": None}
    if found:
        k, chain = found
        cert["chain"] = {"color": k, "indices": chain, "sx_lower_bound": bx.count_sx_from_chain(dc, chain)}
    return "pass", cert


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="antisym", description=__doc__)
    p.add_argument("--out", help="also write the report to this file")
    p.add_argument("--timing", action="store_true", help="record elapsed milliseconds")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    t1 = sub.add_parser("thm1", help="reflection interval system and antisymmetric 2-coloring")
    src = t1.add_mutually_exclusive_group(required=True)
    src.add_argument("--points", help="file with one rational per line")
    src.add_argument("--random", type=int, help="size of a random point set")
    t1.add_argument("--seed", type=int, default=0)
    t1.add_argument("--system-out", help="write the interval system JSON here")
    t1.set_defaults(run=_thm1)

    t2 = sub.add_parser("thm2", help="pair coloring and set fingerprints")
    t2.add_argument("--size", type=int, required=True)
    t2.add_argument("--exhaustive", action="store_true")
    t2.add_argument("--max-size", type=int, default=16)
    t2.set_defaults(run=_thm2)

    t3 = sub.add_parser("thm3", help="vector codes with unique decompositions")
    t3.add_argument("--dims", type=int, required=True)
    t3.add_argument("--coeffs", required=True, help="comma-separated rationals")
    t3.add_argument("--random", type=int, default=0, help="number of random windows instead of the grid")
    t3.add_argument("--window-size", type=int, default=60)
    t3.add_argument("--seed", type=int, default=0)
    t3.add_argument("--witnesses", type=int, default=20)
    t3.set_defaults(run=_thm3)

    t6 = sub.add_parser("thm6", help="factorial-level coloring of Q")
    act = t6.add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = act.add_parser("color")
    c.add_argument("--x", required=True)
    s = act.add_parser("sx")
    s.add_argument("--x", required=True)
    s.add_argument("--max-h", required=True)
    s.add_argument("--max-den", type=int, required=True)
    sl = act.add_parser("slice")
    sl.add_argument("--n", type=int, required=True)
    sl.add_argument("--max-level", type=int, default=fc.MAX_SLICE)
    t6.set_defaults(run=_thm6)

    pt = sub.add_parser("pattern", help="the 2^n - 1 decomposition pattern")
    pt.add_argument("--n", type=int, required=True)
    pt.add_argument("--vectors", action="store_true")
    pt.set_defaults(run=_pattern)

    rm = sub.add_parser("ramsey", help="monochromatic chains in pair colorings")
    rm.add_argument("--m", type=int, required=True)
    rm.add_argument("--colors", type=int, default=2)
    rm.add_argument("--chain", type=int, default=3)
    rm.add_argument("--exhaustive", action="store_true")
    rm.add_argument("--seed", type=int, default=0)
    rm.set_defaults(run=_ramsey)
    return p


def _parameters(ns: argparse.Namespace) -> dict:
    skip = {"run", "out", "timing", "command", "action"}
    return {k: v for k, v in sorted(vars(ns).items()) if k not in skip and v is not None}


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    report: dict = {"command": None, "parameters": {}, "status": "error", "certificate": None, "elapsed": None}
    out_path = None
    try:
        ns = parser.parse_args(argv)
        out_path = ns.out
        if ns.command is None:
            raise UsageError(parser.format_usage() + "antisym: error: a subcommand is required")
        report["command"] = ns.command if ns.command != "thm6" else f"thm6 {ns.action}"
        report["parameters"] = _parameters(ns)
        threads()
        start = time.perf_counter()
        status, cert = ns.run(ns)
        report["status"], report["certificate"] = status, cert
        if ns.timing:
            report["elapsed"] = round((time.perf_counter() - start) * 1000, 3)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        report["certificate"] = {"error": "usage"}
    except SoundnessError as exc:
        report["status"], report["certificate"] = "fail", {"error": str(exc)}
    except AntisymError as exc:
        report["certificate"] = {"error": str(exc), "kind": type(exc).__name__}
    report["exit_code"] = EXIT[report["status"]]
    text = dumps_report(report)
    stdout.write(text)
    if out_path:
        Path(out_path).write_text(text)
    return report["exit_code"]


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
