"""Command line interface: batch certificates and hive diagrams.

Exit status: 0 success (or member), 1 non-member / failed check, 2 error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import semifield
from .building import config_from_flags, f_on_config, lattice_json
from .cluster import PointInChart, Seed
from .hive import (act_lineality, all_keyeqn_ok, boundary_of, cone_check, distinguished_lift,
                   hive_check, lineality_representative, plucker_from_json, plucker_json,
                   random_hive_point)
from .labels import label_from_json
from .realize import flags_from_fan_chart
from .seeds import Triangulation, confA_seed, grassmannian_seed
from .semifield import GenSeries, frac_json
from .svg import render_hive_svg
from .trop import (TropPoint, build_chart, change_chart, chart_ref_confA, chart_ref_gr,
                   lift_to_series, plucker_vector_fast, pushforward_pi, random_plucker_vector,
                   random_trop_point, tropicalize)

OK, NON_MEMBER, ERROR = 0, 1, 2


class CliError(Exception):
    pass


# --------------------------------------------------------------------------
# i/o helpers


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read JSON from {path}: {exc}") from exc


def _emit(args, payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=1, sort_keys=True) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _triangulation(spec: str | None, n: int) -> Triangulation:
    """"fan" / "fan:b" or a JSON list of triangles."""
    if spec is None or spec == "fan":
        return Triangulation.fan(n)
    if spec.startswith("fan:"):
        return Triangulation.fan(n, int(spec[4:]))
    try:
        tris = json.loads(spec)
    except json.JSONDecodeError as exc:
        raise CliError(f"bad triangulation {spec!r}") from exc
    T = Triangulation(n, [tuple(t) for t in tris])
    T.validate()
    return T


def _plucker_payload(y, k, n) -> dict:
    return {"k": k, "n": n, "plucker": plucker_json(y)}


def _load_plucker(data) -> tuple[dict, int, int]:
    """A full Plücker vector from {"k","n","plucker"} or from a TropPoint JSON."""
    if "plucker" in data:
        y = plucker_from_json(data["plucker"])
        return y, int(data["k"]), int(data["n"])
    if "chart" in data:
        x = TropPoint.from_json(data)
        k, n = x.ref["k"], x.ref["n"]
        if x.ref["type"] == "gr":
            return plucker_vector_fast(x), k, n
        return pushforward_pi(x, full=True), k, n
    raise CliError("expected a Plücker vector or a tropical point")


def _load_trop(data) -> TropPoint:
    if "chart" not in data:
        raise CliError("expected a tropical point with a chart reference")
    return TropPoint.from_json(data)


def _parse_path(seed: Seed, items: list[str]) -> list:
    by_name = {str(lab): lab for lab in seed.labels}
    out = []
    for it in items:
        it = it.strip()
        if it.startswith("{"):
            out.append(label_from_json(json.loads(it)))
        elif it in by_name:
            out.append(by_name[it])
        else:
            raise CliError(f"unknown vertex {it!r}")
    return out


# --------------------------------------------------------------------------
# subcommands


def cmd_seed(args) -> int:
    if args.kind == "gr":
        seed, ref = grassmannian_seed(args.k, args.n), chart_ref_gr(args.k, args.n)
    else:
        T = _triangulation(args.triangulation, args.n)
        seed, ref = confA_seed(args.k, args.n, T), chart_ref_confA(args.k, args.n, T)
    out = seed.to_json()
    out["chart"] = ref
    _emit(args, out)
    return OK


def cmd_mutate(args) -> int:
    data = _read_json(args.input)
    items = args.path.split(";") if args.path else []
    # labels name vertices of the starting chart; vertex ids survive mutation
    if "coords" in data:
        x = _load_trop(data)
        ids = [x.chart.indices[x.chart.pos_of_label(lab)] for lab in _parse_path(x.chart, items)]
        _emit(args, change_chart(x, ids).to_json())
        return OK
    seed = Seed.from_json(data)
    for idx in [seed.indices[seed.pos_of_label(lab)] for lab in _parse_path(seed, items)]:
        seed = seed.mutate(idx)
    _emit(args, seed.to_json())
    return OK


def cmd_tropicalize(args) -> int:
    data = _read_json(args.input)
    ref = data["chart"]
    chart = build_chart(ref)
    by_name = {str(lab): lab for lab in chart.labels}
    vals = {by_name[name]: GenSeries.from_json(v) for name, v in data["coords"].items()}
    pt = PointInChart(chart, [vals[lab] for lab in chart.labels])
    _emit(args, tropicalize(pt, ref).to_json())
    return OK


def cmd_lift(args) -> int:
    y, k, n = _load_plucker(_read_json(args.input))
    T = _triangulation(args.triangulation, n)
    x = distinguished_lift(y, k, n, T)
    out = x.to_json()
    out["boundary"] = [frac_json(a) for a in boundary_of(y, k, n)]
    status = OK
    if args.check:
        section = pushforward_pi(x, full=True) == y
        consistent = all_keyeqn_ok(x)
        out["section"] = section
        out["keyeqn"] = consistent
        status = OK if section and consistent else NON_MEMBER
    _emit(args, out)
    return status


def cmd_check_cone(args) -> int:
    y, k, n = _load_plucker(_read_json(args.input))
    cone = cone_check(y, k, n)
    x = distinguished_lift(y, k, n)
    hive = hive_check(x, k, n)
    out = {"k": k, "n": n, "cone": cone.to_json(args.strict), "hive": hive.to_json(args.strict),
           "agree": cone.member == hive.member}
    _emit(args, out)
    return OK if out["cone"]["member"] else NON_MEMBER


def cmd_oracle(args) -> int:
    data = _read_json(args.input)
    if "plucker" in data:
        y, k, n = _load_plucker(data)
        x = distinguished_lift(y, k, n)
    else:
        x = _load_trop(data)
        if x.ref["type"] != "confA" or x.ref.get("path"):
            raise CliError("oracle needs a point on a fan-triangulation chart of Conf_n A")
    k, n = x.ref["k"], x.ref["n"]
    rng = random.Random(args.rng_seed)
    lifted = lift_to_series(x, rng)
    T = Triangulation(n, [tuple(t) for t in x.ref["triangles"]])
    base = next(b for b in range(1, n + 1) if Triangulation.fan(n, b) == T)
    C = flags_from_fan_chart(lifted.by_label(), k, n, base)
    cfg = config_from_flags(C, check_all=True, mode=args.mode)
    rows = []
    ok = True
    for lab, v in x.by_label().items():
        res = f_on_config(cfg, lab, args.bound)
        rows.append({"label": str(lab), "chart": frac_json(v), "oracle": frac_json(res.value),
                     "stable": res.stable})
        ok = ok and res.value == v
    out = {"k": k, "n": n, "hive": hive_check(x).member, "partner_independent": cfg.independent,
           "warnings": cfg.warnings, "agree": ok, "rows": rows}
    if args.lattices:
        out["lattices"] = lattice_json(cfg.lattices)
    _emit(args, out)
    return OK if ok and cfg.independent else NON_MEMBER


def cmd_lineality(args) -> int:
    y, k, n = _load_plucker(_read_json(args.input))
    if args.coeffs:
        c = [Fraction(t) for t in args.coeffs.split(",")]
        if len(c) != n:
            raise CliError(f"need {n} coefficients")
    else:
        c = lineality_representative(y, k, n, "lp" if args.lp else "uniform")
    y2 = act_lineality(y, c, k, n)
    out = _plucker_payload(y2, k, n)
    out["coeffs"] = [frac_json(t) for t in c]
    out["cone_member"] = cone_check(y2, k, n).member
    _emit(args, out)
    return OK


def cmd_rand(args) -> int:
    rng = random.Random(args.rng_seed)
    k, n = args.k, args.n
    if args.kind == "plucker":
        y = random_plucker_vector(rng, k, n, -args.range, args.range, args.denom)
        _emit(args, _plucker_payload(y, k, n))
    elif args.kind == "gr":
        _emit(args, random_trop_point(rng, grassmannian_seed(k, n), chart_ref_gr(k, n),
                                      -args.range, args.range, args.denom).to_json())
    elif args.kind == "confA":
        T = _triangulation(args.triangulation, n)
        _emit(args, random_trop_point(rng, confA_seed(k, n, T), chart_ref_confA(k, n, T),
                                      -args.range, args.range, args.denom).to_json())
    else:  # hive
        T = _triangulation(args.triangulation, n)
        _emit(args, random_hive_point(rng, k, n, T, -args.range, args.range, args.denom).to_json())
    return OK


def cmd_diagram(args) -> int:
    data = _read_json(args.input)
    if "plucker" in data:
        y, k, n = _load_plucker(data)
        x = distinguished_lift(y, k, n, _triangulation(args.triangulation, n))
    else:
        x = _load_trop(data)
    _emit(args, render_hive_svg(x, title=args.title))
    return OK


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tropgrass", description=__doc__.splitlines()[0])
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--precision", type=int, default=None,
                   help="grid units kept above the valuation for inexact series")
    # the shared flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rng-seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--precision", type=int, default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.set_defaults(func=fn)
        sp.add_argument("--out", default=None)
        return sp

    sp = add("seed", cmd_seed, "emit a Grassmannian or Conf_n A seed")
    sp.add_argument("--kind", choices=("gr", "confA"), default="gr")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--triangulation", default=None)

    sp = add("mutate", cmd_mutate, "mutate a seed or a tropical point along a path")
    sp.add_argument("input")
    sp.add_argument("--path", default="", help="vertex labels separated by ';'")

    sp = add("tropicalize", cmd_tropicalize, "minus valuation of a series point")
    sp.add_argument("input")

    sp = add("lift", cmd_lift, "distinguished lift of a Plücker vector")
    sp.add_argument("input")
    sp.add_argument("--triangulation", default=None)
    sp.add_argument("--check", action="store_true", help="verify the section and key equations")

    sp = add("check-cone", cmd_check_cone, "cone inequalities and hive inequalities of the lift")
    sp.add_argument("input")
    sp.add_argument("--strict", action="store_true")

    sp = add("oracle", cmd_oracle, "verify a point against the building oracle")
    sp.add_argument("input")
    sp.add_argument("--bound", type=int, default=0)
    sp.add_argument("--lattices", action="store_true")
    sp.add_argument("--mode", choices=("SL", "PGL"), default="SL")

    sp = add("lineality", cmd_lineality, "act by the l_i, or find a cone representative")
    sp.add_argument("input")
    sp.add_argument("--coeffs", default=None)
    sp.add_argument("--lp", action="store_true")

    sp = add("rand", cmd_rand, "reproducible random points")
    sp.add_argument("--kind", choices=("plucker", "gr", "confA", "hive"), default="plucker")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--range", type=int, default=3)
    sp.add_argument("--denom", type=int, default=1)
    sp.add_argument("--triangulation", default=None)

    sp = add("diagram", cmd_diagram, "SVG hive diagram")
    sp.add_argument("input")
    sp.add_argument("--triangulation", default=None)
    sp.add_argument("--title", default=None)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.precision is not None:
        semifield.REL_PREC = args.precision
    try:
        return args.func(args)
    except (CliError, ValueError, ArithmeticError, KeyError) as exc:
        print(f"tropgrass: error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
