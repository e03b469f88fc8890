"""Command-line front end.

Every command produces a report with a result payload, warnings, notes and a
legend naming the subgroup classes and characters used in renderings.  Text and
JSON output carry the same canonical strings.  Exit codes: 0 success,
1 validation or computation failure, 2 unreadable or unparsable input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path
from typing import Any

from .burnside import (ParseError, RingMismatchError, legend, symmetric_power, tb_ring)
from .group_core import FiniteGroup, GroupError, cyclic_group, load_group
from .invariants import (FactoredZeta, RecoveryError, poincare_from_resolution,
                         recover_zeta, statement1_sides, zeta_from_resolution)
from .resolution import (ResolutionError, load_resolution, multiplicity_matrix, n_value, omega_vector,
                         validate)
from .series import (FactoredSeries, FactorizationError, MultiSeries, SeriesError, factored_from_json,
                     factored_to_json, factorize, map_coefficients, parse_factored, random_factored_series,
                     render_factored, series_from_json, series_inverse, series_to_json,
                     substitute_monomial)

FIXTURES = Path(__file__).parent / "fixtures"


class InputError(Exception):
    """Unreadable or unparsable input (exit code 2)."""


class Failure(Exception):
    """Validation or computation failure (exit code 1)."""


class Report:
    def __init__(self, command: str):
        self.command = command
        self.result: Any = None
        self.lines: list[str] = []
        self.warnings: list[str] = []
        self.notes: list[str] = []
        self.legend: list[str] = []
        self.timing: float | None = None
        self.ok = True

    def to_json(self) -> dict:
        out = {"command": self.command, "ok": self.ok, "result": self.result,
               "warnings": self.warnings, "notes": self.notes, "legend": self.legend}
        if self.timing is not None:
            out["timing_seconds"] = round(self.timing, 6)
        return out

    def to_text(self) -> str:
        out = [f"command: {self.command}", f"status: {'ok' if self.ok else 'FAILED'}", "result:"]
        out += [f"  {line}" for line in self.lines]
        out.append("warnings:" if self.warnings else "warnings: none")
        out += [f"  - {w}" for w in self.warnings]
        if self.notes:
            out.append("notes:")
            out += [f"  - {n}" for n in self.notes]
        if self.legend:
            out.append("legend:")
            out += [f"  {line}" for line in self.legend]
        if self.timing is not None:
            out.append(f"timing: {self.timing:.6f}s")
        return "\n".join(out) + "\n"


# -- input loading ------------------------------------------------------------------


def _find(path: str, sub: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    for cand in (FIXTURES / sub / path, FIXTURES / sub / f"{path}.json"):
        if cand.exists():
            return cand
    raise InputError(f"no such file: {path}")


def _read_json(path: Path) -> Any:
    try:
        return json.loads(path.read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc


def load_group_arg(path: str | None) -> FiniteGroup:
    if not path:
        raise InputError("--group is required")
    try:
        return load_group(_read_json(_find(path, "groups")))
    except GroupError as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_resolution_arg(path: str | None):
    if not path:
        raise InputError("--resolution is required")
    p = _find(path, "resolutions")
    _read_json(p)
    try:
        return load_resolution(p)
    except ResolutionError as exc:
        raise InputError(f"{path}: {exc}") from exc


def parse_bound(text: str | None, arity: int | None = None) -> tuple[int, ...]:
    if text is None:
        raise InputError("--bound is required")
    try:
        bound = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"cannot parse bound {text!r}") from None
    if len(bound) == 1 and arity and arity > 1:
        bound = bound * arity
    if arity is not None and len(bound) != arity:
        raise InputError(f"bound {text!r} has arity {len(bound)}, expected {arity}")
    if any(b <= 0 for b in bound):
        raise InputError("bound components must be positive")
    return bound


def load_series_input(args, G: FiniteGroup | None, index: int = 0):
    """A MultiSeries or FactoredSeries from --series (JSON file) or --factored (text)."""
    if args.factored:
        if G is None:
            raise InputError("--factored needs --group")
        try:
            return parse_factored(tb_ring(G), args.factored, args.arity)
        except (ParseError, SeriesError) as exc:
            raise InputError(f"cannot parse factored series: {exc}") from exc
    if not args.series or len(args.series) <= index:
        raise InputError("a series is required (--series FILE or --factored TEXT)")
    data = _read_json(Path(args.series[index]))
    try:
        if "factors" in data or ("text" in data and "terms" not in data):
            if G is None:
                G = cyclic_group(1)
            return factored_from_json(data, tb_ring(G))
        return series_from_json(data, G)
    except (ParseError, SeriesError, KeyError, TypeError) as exc:
        raise InputError(f"{args.series[index]}: {exc}") from exc


def _expanded(s, bound_text: str | None):
    if isinstance(s, FactoredSeries):
        return s.expand(parse_bound(bound_text, s.arity))
    return s


def _series_result(rep: Report, s: MultiSeries):
    rep.result = series_to_json(s)
    rep.lines.append(f"bound: {list(s.bound)}")
    rep.lines.append(str(s))


def _factored_result(rep: Report, p: FactoredSeries):
    rep.result = factored_to_json(p)
    rep.lines.append(render_factored(p))


def _zeta_result(rep: Report, z: FactoredZeta, zt: FactoredZeta):
    rep.result = {"zeta": z.to_json(), "zeta_tilde": zt.to_json()}
    rep.lines.append(f"zeta:       {z}")
    rep.lines.append(f"zeta-tilde: {zt}")


# -- commands -----------------------------------------------------------------------


def cmd_group_inspect(args, rep: Report):
    G = load_group_arg(args.group)
    rep.legend = legend(G)
    ring = tb_ring(G)
    classes = [ring.key_name(c) for c in ring.classes]
    rep.result = {"order": G.order, "labels": list(G.labels),
                  "subgroup_classes": [{"representative": list(H.elements), "size": len(m)}
                                       for H, m in G.subgroup_classes],
                  "tb_classes": classes}
    rep.lines.append(f"order {G.order}; {len(G.subgroup_classes)} subgroup classes; "
                     f"{len(classes)} equipped classes")
    rep.lines.append("classes: " + ", ".join(classes))


def cmd_ring_mul(args, rep: Report):
    G = load_group_arg(args.group)
    ring = tb_ring(G)
    rep.legend = legend(G)
    try:
        a, b = ring.parse(args.a), ring.parse(args.b)
    except ParseError as exc:
        raise InputError(str(exc)) from exc
    x = a * b
    rep.result = ring.render(x)
    rep.lines.append(rep.result)


def cmd_ring_sympow(args, rep: Report):
    G = load_group_arg(args.group)
    ring = tb_ring(G)
    rep.legend = legend(G)
    try:
        c = ring.parse_name(args.cls) if args.cls != "1" else ring.unit_key
    except ParseError as exc:
        raise InputError(str(exc)) from exc
    if args.k < 0:
        raise InputError("--k must be nonnegative")
    rep.result = ring.render(symmetric_power(c, args.k))
    rep.lines.append(rep.result)


def _maybe_group(args) -> FiniteGroup | None:
    return load_group_arg(args.group) if args.group else None


def cmd_series(args, rep: Report):
    G = _maybe_group(args)
    if G is not None:
        rep.legend = legend(G)
    op = args.op
    s = load_series_input(args, G)
    if op == "expand":
        _series_result(rep, _expanded(s, args.bound))
    elif op == "mul":
        second = argparse.Namespace(**{**vars(args), "factored": None})
        b = load_series_input(second, G, 0 if args.factored else 1)
        a = _expanded(s, args.bound)
        _series_result(rep, a * _expanded(b, ",".join(map(str, a.bound))))
    elif op == "invert":
        _series_result(rep, series_inverse(_expanded(s, args.bound)))
    elif op == "subst":
        if not args.images:
            raise InputError("--images is required, e.g. '1,1;2,0'")
        try:
            images = [tuple(int(x) for x in part.split(",")) for part in args.images.split(";")]
        except ValueError:
            raise InputError(f"cannot parse images {args.images!r}") from None
        a = _expanded(s, args.source_bound or args.bound)
        target = parse_bound(args.bound, len(images[0])) if args.bound and args.source_bound else None
        _series_result(rep, substitute_monomial(a, images, target))
    elif op == "factor":
        _factored_result(rep, factorize(_expanded(s, args.bound)))
    elif op == "reduce":
        _series_result(rep, map_coefficients(_expanded(s, args.bound), args.reduction))


def cmd_resolution(args, rep: Report):
    res = load_resolution_arg(args.resolution)
    rep.legend = legend(res.group)
    if args.op == "validate":
        v = validate(res)
        rep.result = v.to_json()
        rep.notes += v.notes
        rep.lines.append("valid" if v.ok else "INVALID")
        rep.lines += [f"failure: {f}" for f in v.failures]
        if not v.ok:
            rep.ok = False
        return
    if args.op == "mmatrix":
        m = multiplicity_matrix(res.graph)
        rep.result = {"vertices": list(m.vertices), "m": m.rows()}
        rep.lines.append("vertices: " + " ".join(m.vertices))
        rep.lines += [" ".join(str(x) for x in row) for row in m.rows()]
        return
    v = validate(res)
    if not v.ok:
        raise Failure("; ".join(v.failures))
    rows = []
    for s in res.strata:
        rows.append({"stratum": s.id, "omega": list(omega_vector(res, s)), "n": n_value(res, s)})
        rep.lines.append(f"{s.id}: omega={list(omega_vector(res, s))} n={n_value(res, s)}")
    rep.result = rows


def cmd_poincare(args, rep: Report):
    res = load_resolution_arg(args.resolution)
    rep.legend = legend(res.group)
    bound = parse_bound(args.bound, res.r) if args.bound else None
    p, expansion = poincare_from_resolution(res, bound)
    rep.notes.append("stratum Euler characteristics are declared, unverified")
    _factored_result(rep, p)
    if expansion is not None:
        rep.result = {"factored": rep.result, "expansion": series_to_json(expansion)}
        rep.lines.append(f"expansion to {list(bound)}: {expansion}")


def cmd_zeta(args, rep: Report):
    if args.op == "from-resolution":
        res = load_resolution_arg(args.resolution)
        rep.legend = legend(res.group)
        _zeta_result(rep, *zeta_from_resolution(res))
        return
    if args.resolution:
        res = load_resolution_arg(args.resolution)
        G = res.group
        p, _ = poincare_from_resolution(res)
    else:
        G = load_group_arg(args.group)
        p = load_series_input(args, G)
        if isinstance(p, MultiSeries):
            p = factorize(p)
    rep.legend = legend(G)
    out = recover_zeta(p, G, args.mode)
    rep.warnings += out.warnings
    _zeta_result(rep, out.zeta, out.zeta_tilde)
    rep.result["mode"] = args.mode
    rep.result["selections"] = out.selections
    rep.lines.append(f"poincare: {render_factored(p)}")


def cmd_check_statement1(args, rep: Report):
    res = load_resolution_arg(args.resolution)
    rep.legend = legend(res.group)
    ne_path = args.nonequivariant or str(FIXTURES / "nonequivariant" / f"{res.name}.json")
    try:
        ne = factored_from_json(_read_json(_find(ne_path, "nonequivariant")), tb_ring(cyclic_group(1)))
    except (ParseError, SeriesError) as exc:
        raise InputError(f"{ne_path}: {exc}") from exc
    p, _ = poincare_from_resolution(res)
    bound = parse_bound(args.bound or "8", res.r)
    lhs, rhs = statement1_sides(p, ne, bound)
    rep.ok = lhs == rhs
    rep.result = {"equal": rep.ok, "rhohat": series_to_json(lhs), "nonequivariant": series_to_json(rhs)}
    rep.lines.append("rhohat of the equivariant series equals the identified non-equivariant series"
                     if rep.ok else "MISMATCH")
    rep.lines.append(f"lhs: {lhs}")
    rep.lines.append(f"rhs: {rhs}")


# -- bundled fixtures ---------------------------------------------------------------


def fixtures_run(seed: int = 0, manifest: Path | None = None, random_cases: int = 20) -> Report:
    """Run every bundled fixture against its recorded expectations."""
    rep = Report("fixtures run")
    manifest = manifest or FIXTURES / "manifest.json"
    base = manifest.parent
    checks: list[dict] = []

    def check(name: str, expected, actual):
        ok = expected == actual
        checks.append({"check": name, "ok": ok})
        rep.lines.append(f"{'PASS' if ok else 'FAIL'} {name}")
        if not ok:
            rep.ok = False
            rep.lines.append(f"    expected: {expected}")
            rep.lines.append(f"    actual:   {actual}")

    def error(name: str, exc: Exception):
        rep.ok = False
        checks.append({"check": name, "ok": False})
        rep.lines.append(f"FAIL {name}: {type(exc).__name__}: {exc}")

    try:
        spec = json.loads(manifest.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"manifest {manifest}: {exc}") from exc

    for case in spec.get("rings", []):
        name = f"ring {case['group']} {case['op']}"
        try:
            G = load_group(json.loads((base / case["group"]).read_text()))
            ring = tb_ring(G)
            if case["op"] == "mul":
                got = ring.render(ring.parse(case["a"]) * ring.parse(case["b"]))
                name += f" {case['a']} * {case['b']}"
            else:
                c = ring.parse_name(case["class"]) if case["class"] != "1" else ring.unit_key
                got = ring.render(symmetric_power(c, case["k"]))
                name += f" S^{case['k']}{case['class']}"
            check(name, case["expect"], got)
        except Exception as exc:  # noqa: BLE001 - reported as a named failure
            error(name, exc)

    for case in spec.get("resolutions", []):
        tag = case["name"]
        try:
            res = load_resolution(base / case["resolution"])
            v = validate(res)
            check(f"{tag}: validates", [], v.failures)
            if "mmatrix" in case:
                check(f"{tag}: multiplicity matrix", case["mmatrix"], multiplicity_matrix(res.graph).rows())
            G = res.group
            p, _ = poincare_from_resolution(res)
            check(f"{tag}: poincare", case["poincare"], render_factored(p))
            bound = tuple(case["bound"])
            check(f"{tag}: factorize(expand) round trip", render_factored(p),
                  render_factored(factorize(p.expand(bound))))
            ne = factored_from_json(json.loads((base / case["nonequivariant"]).read_text()),
                                    tb_ring(cyclic_group(1)))
            lhs, rhs = statement1_sides(p, ne, bound)
            check(f"{tag}: rhohat consistency", str(rhs), str(lhs))
            if case.get("zeta") == "error":
                try:
                    zeta_from_resolution(res)
                    check(f"{tag}: zeta rejected", "error", "no error")
                except RecoveryError:
                    check(f"{tag}: zeta rejected", "error", "error")
                continue
            z, zt = zeta_from_resolution(res)
            check(f"{tag}: zeta", case["zeta"], str(z))
            check(f"{tag}: zeta-tilde", case["zeta_tilde"], str(zt))
            for mode, expect in case.get("recover", {}).items():
                out = recover_zeta(p, G, mode)
                if expect == "match":
                    check(f"{tag}: recover {mode} matches resolution", (str(z), str(zt)),
                          (str(out.zeta), str(out.zeta_tilde)))
                else:
                    check(f"{tag}: recover {mode}", (expect["zeta"], expect["zeta_tilde"]),
                          (str(out.zeta), str(out.zeta_tilde)))
                    if expect.get("warning"):
                        check(f"{tag}: recover {mode} warns", True, bool(out.warnings))
                        rep.warnings += [f"{tag}: {w}" for w in out.warnings]
            for ref in case.get("references", []):
                if ref["text"] != render_factored(p):
                    rep.notes.append(f"{tag}: computed poincare differs from reference "
                                     f"{ref['text']} ({ref['why']})")
        except Exception as exc:  # noqa: BLE001
            error(tag, exc)

    rng = random.Random(seed)
    groups = spec.get("random_groups", [])
    for i in range(random_cases if groups else 0):
        gname = groups[i % len(groups)]
        name = f"random factorization #{i} over {gname} (seed {seed})"
        try:
            G = load_group(json.loads((base / gname).read_text()))
            bound = rng.choice([(8,), (4, 4), (3, 3, 3)])
            f = random_factored_series(tb_ring(G), bound, rng.randint(1, 4), rng)
            check(name, render_factored(f), render_factored(factorize(f.expand(bound))))
        except Exception as exc:  # noqa: BLE001
            error(name, exc)

    passed = sum(c["ok"] for c in checks)
    rep.result = {"passed": passed, "failed": len(checks) - passed, "checks": checks}
    rep.lines.append(f"{passed}/{len(checks)} checks passed")
    return rep


def cmd_fixtures(args, rep: Report):
    out = fixtures_run(args.seed, Path(args.manifest) if args.manifest else None)
    rep.result, rep.lines, rep.ok = out.result, out.lines, out.ok
    rep.warnings += out.warnings
    rep.notes += out.notes


# -- argument parsing ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write the report to this file")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--timing", action="store_true", help="include wall-clock timing")
    common.add_argument("--group")
    common.add_argument("--resolution")
    common.add_argument("--series", action="append", help="series JSON file (repeat for mul)")
    common.add_argument("--factored", help="factored series text, e.g. '(1 - t1)^{-[G/e]}'")
    common.add_argument("--arity", type=int)
    common.add_argument("--bound", help="comma-separated truncation bound")
    common.add_argument("--mode", choices=("free", "general"), default="general")

    p = argparse.ArgumentParser(prog="eqpoincare", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("group").add_subparsers(dest="op", required=True)
    g.add_parser("inspect", parents=[common]).set_defaults(func=cmd_group_inspect)

    r = sub.add_parser("ring").add_subparsers(dest="op", required=True)
    m = r.add_parser("mul", parents=[common])
    m.add_argument("--a", required=True)
    m.add_argument("--b", required=True)
    m.set_defaults(func=cmd_ring_mul)
    s = r.add_parser("sympow", parents=[common])
    s.add_argument("--class", dest="cls", required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_ring_sympow)

    se = sub.add_parser("series").add_subparsers(dest="op", required=True)
    for op in ("expand", "mul", "invert", "subst", "factor", "reduce"):
        q = se.add_parser(op, parents=[common])
        if op == "subst":
            q.add_argument("--images", help="semicolon-separated image degrees, e.g. '1,1;0,1'")
            q.add_argument("--source-bound", help="bound for expanding a factored input")
        if op == "reduce":
            q.add_argument("--reduction", choices=("rho", "rhohat", "eps"), required=True)
        q.set_defaults(func=cmd_series)

    rs = sub.add_parser("resolution").add_subparsers(dest="op", required=True)
    for op in ("validate", "mmatrix", "omega"):
        rs.add_parser(op, parents=[common]).set_defaults(func=cmd_resolution)

    sub.add_parser("poincare", parents=[common]).set_defaults(func=cmd_poincare)

    z = sub.add_parser("zeta").add_subparsers(dest="op", required=True)
    z.add_parser("from-resolution", parents=[common]).set_defaults(func=cmd_zeta)
    z.add_parser("recover", parents=[common]).set_defaults(func=cmd_zeta)

    c = sub.add_parser("check").add_subparsers(dest="op", required=True)
    s1 = c.add_parser("statement1", parents=[common])
    s1.add_argument("--nonequivariant", help="non-equivariant factored series JSON")
    s1.set_defaults(func=cmd_check_statement1)

    f = sub.add_parser("fixtures").add_subparsers(dest="op", required=True)
    fr = f.add_parser("run", parents=[common])
    fr.add_argument("--manifest")
    fr.set_defaults(func=cmd_fixtures)
    return p


def run(argv: list[str] | None = None) -> tuple[int, Report, Any]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (2 if exc.code else 0), Report("usage"), None
    name = " ".join(x for x in (args.command, getattr(args, "op", None)) if x)
    rep = Report(name)
    start = time.perf_counter()
    code = 0
    try:
        args.func(args, rep)
        if not rep.ok:
            code = 1
    except (InputError, ParseError) as exc:
        rep.ok, code = False, 2
        rep.lines.append(f"input error: {exc}")
    except (Failure, ResolutionError, SeriesError, FactorizationError, RecoveryError,
            RingMismatchError, GroupError, ValueError) as exc:
        rep.ok, code = False, 1
        rep.lines.append(f"error: {type(exc).__name__}: {exc}")
    if args.timing:
        rep.timing = time.perf_counter() - start
    return code, rep, args


def main(argv: list[str] | None = None) -> int:
    code, rep, args = run(argv)
    if args is None:
        return code
    text = json.dumps(rep.to_json(), indent=2, sort_keys=True) + "\n" if args.format == "json" \
        else rep.to_text()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
