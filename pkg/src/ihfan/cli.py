"""Batch front end: parse fan or polytope inputs, run the verification
checks, emit reports.

Exit codes: 0 success, 1 a mathematical check failed, 2 input or usage
error.  The barycenter rule is taken from IHFAN_SEED_CHOICE (default or
alt)."""

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .exactlin import rank, sc
from .fans import (PLFunction, face_fan_with_support, fan_from_json_dict,
                   is_complete, is_strictly_convex, normal_fan, parse_vector,
                   product_fan)
from .ihsheaf import (build_distinguished_pair, pair_from_json_dict,
                      pair_to_json_dict)
from .cohomology import (ds_check, hl_rank_report, hrm_check, ih_profile,
                         kunneth_check, pairing_matrix, profile_for_fan,
                         toric_h_of_fan)

ALL_CHECKS = ("ds", "pd", "hl", "hrm", "kunneth", "oracle")


class InputError(Exception):
    pass


@dataclass
class JobConfig:
    path: str
    command: str
    cap: int = None
    l_source: str = None
    checks: tuple = None
    fmt: str = "json"
    rule: str = "default"
    oracle: bool = False
    emit_pair: bool = False
    out: str = None

    def __post_init__(self):
        if self.cap is not None and (self.cap < 0 or self.cap % 2):
            raise InputError("degree cap must be even and nonnegative")
        if self.checks:
            for c in self.checks:
                if c not in ALL_CHECKS:
                    raise InputError(f"unknown check: {c}")


def _seed_rule():
    got = os.environ.get("IHFAN_SEED_CHOICE", "default")
    if got not in ("default", "alt"):
        raise InputError(
            f"IHFAN_SEED_CHOICE must be 'default' or 'alt', got {got!r}")
    return got


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise InputError(
            f"invalid JSON in {path} at line {e.lineno} column {e.colno}: "
            f"{e.msg}")


class LoadedInput:
    """A parsed input: either a ready distinguished pair (dump) or a fan,
    possibly with a support function and an inline l descriptor."""

    __slots__ = ("fan", "pair", "support", "inline_l")

    def __init__(self, fan=None, pair=None, support=None, inline_l=None):
        self.fan = fan if fan is not None else pair.fan
        self.pair = pair
        self.support = support
        self.inline_l = inline_l


def load_input(path, rule):
    obj = _read_json(path)
    if not isinstance(obj, dict):
        raise InputError("input must be a JSON object")
    try:
        if "stalks" in obj:
            return LoadedInput(pair=pair_from_json_dict(obj))
        if "vertices" in obj:
            from .exactlin import ScalarField

            field = ScalarField.from_json(obj.get("field", "Q"))
            verts = [parse_vector(v, field) for v in obj["vertices"]]
            kind = obj.get("fan", "face")
            if kind == "face":
                fan, support = face_fan_with_support(verts, field=field)
            elif kind == "normal":
                fan, support = normal_fan(verts, field=field)
            else:
                raise InputError(f"unknown fan kind: {kind}")
            return LoadedInput(fan=fan, support=support,
                               inline_l=obj.get("l"))
        if "maximal_cones" in obj:
            fan = fan_from_json_dict(obj)
            return LoadedInput(fan=fan, inline_l=obj.get("l"))
    except InputError:
        raise
    except (ValueError, KeyError, TypeError) as e:
        raise InputError(f"invalid input: {e}")
    raise InputError(
        "input is not a fan, polytope, or pair dump (expected one of the "
        "keys 'maximal_cones', 'vertices', 'stalks')")


def _l_from_desc(fan, desc):
    if not isinstance(desc, dict):
        raise InputError("l descriptor must be a JSON object")
    if "ray_values" in desc:
        order = fan.rays()
        vals = desc["ray_values"]
        if len(vals) != len(order):
            raise InputError("ray_values length does not match the ray count")
        rid = {fan.cones[i].rays[0]: i for i in fan.ray_ids()}
        values = {rid[r]: sc(fan.field.parse(str(v)))
                  for r, v in zip(order, vals)}
        return PLFunction.from_ray_values(fan, values)
    if "per_cone" in desc:
        rows = desc["per_cone"]
        index = {r: i for i, r in enumerate(fan.rays())}
        mx = sorted(fan.maximal_ids,
                    key=lambda m: sorted(index[r]
                                         for r in fan.cones[m].rays))
        if len(rows) != len(mx):
            raise InputError("per_cone length does not match the maximal "
                             "cone count")
        per = {m: parse_vector(row, fan.field)
               for m, row in zip(mx, rows)}
        return PLFunction(fan, per)
    raise InputError("l descriptor needs 'ray_values' or 'per_cone'")


def build_l(loaded, config):
    """Resolve the conewise linear function for hl/hrm; validated strictly
    convex."""
    src = config.l_source
    if src is None:
        if loaded.inline_l is not None:
            src = "inline"
        elif loaded.support is not None:
            src = "support"
        else:
            return None
    if src == "support":
        if loaded.support is None:
            raise InputError("--l support needs a polytope input")
        l = loaded.support
    elif src == "inline":
        if loaded.inline_l is None:
            raise InputError("no inline l in the input")
        l = _l_from_desc(loaded.fan, loaded.inline_l)
    elif src.startswith("file="):
        l = _l_from_desc(loaded.fan, _read_json(src[5:]))
    else:
        raise InputError(f"unknown l source: {src}")
    try:
        ok = is_strictly_convex(loaded.fan, l)
    except ValueError as e:
        raise InputError(str(e))
    if not ok:
        raise InputError("l is not strictly convex on the fan")
    return l


def _profile(loaded, config):
    try:
        if loaded.pair is not None:
            return ih_profile(loaded.pair, cap=config.cap)
        if config.cap is not None:
            pair = build_distinguished_pair(loaded.fan, rule=config.rule)
            return ih_profile(pair, cap=config.cap)
        return profile_for_fan(loaded.fan, config.rule)
    except ValueError as e:
        raise MathFailure(str(e))


class MathFailure(Exception):
    pass


def _fmt_h(h):
    return "[" + ",".join(str(x) for x in h) + "]"


def run_checks(loaded, config, profile, l):
    """Run the selected checks; returns (report dict, per-check pass map)."""
    fan = loaded.fan
    checks = config.checks
    if checks is None:
        checks = ["ds", "pd", "oracle"]
        if l is not None:
            checks += ["hl", "hrm"]
    passed = {}
    report = {"h": list(profile.h_vector())}
    report["ds"] = ds_check(profile)
    if "ds" in checks:
        passed["ds"] = report["ds"]
    pd_ranks = {}
    pd_ok = True
    for d in range(0, 2 * fan.n + 1, 2):
        try:
            pd_ranks[str(d)] = rank(pairing_matrix(profile, d))
        except ValueError:
            pd_ranks[str(d)] = -1
            pd_ok = False
    report["pd_ranks"] = pd_ranks
    if "pd" in checks:
        passed["pd"] = pd_ok
    oracle_h = list(toric_h_of_fan(fan))
    want = oracle_h if config.cap is None else oracle_h[:config.cap // 2 + 1]
    report["oracle_h"] = oracle_h
    report["oracle_match"] = list(profile.h_vector()) == want
    if "oracle" in checks:
        passed["oracle"] = report["oracle_match"]
    if l is not None:
        hl = hl_rank_report(profile, l, lkey="cli")
        report["hl_ranks"] = {str(d): [got, wanted]
                              for d, (got, wanted) in sorted(hl.items())}
        if "hl" in checks:
            passed["hl"] = all(g == w for g, w in hl.values())
        qr = hrm_check(profile, l, lkey="cli")
        report["hrm"] = [{"d": r["d"],
                          "signature": list(r["signature"]),
                          "primitive_dim": r["primitive_dim"],
                          "definite": r["definite"]} for r in qr.rows]
        if "hrm" in checks:
            passed["hrm"] = qr.ok
    else:
        report["hl_ranks"] = {}
        report["hrm"] = []
        if "hl" in checks or "hrm" in checks:
            raise InputError("checks hl and hrm need an l source "
                             "(--l support|file=PATH or an inline l)")
    if "kunneth" in checks:
        from .fans import build_fan

        line = build_fan(1, [[(1,)], [(-1,)]], field=fan.field)
        prod = product_fan(fan, line)
        pprof = profile_for_fan(prod, config.rule)
        passed["kunneth"] = kunneth_check(profile, (1, 1), pprof)
        report["kunneth"] = passed["kunneth"]
    return report, passed


def cmd_hvector(config):
    loaded = load_input(config.path, config.rule)
    profile = _profile(loaded, config)
    print("h = " + _fmt_h(profile.h_vector()))
    if config.oracle:
        oracle_h = toric_h_of_fan(loaded.fan)
        want = oracle_h if config.cap is None else \
            oracle_h[:config.cap // 2 + 1]
        print("oracle h = " + _fmt_h(oracle_h))
        match = tuple(profile.h_vector()) == tuple(want)
        print("oracle match = " + ("true" if match else "false"))
    return 0


def cmd_verify(config):
    loaded = load_input(config.path, config.rule)
    if not is_complete(loaded.fan):
        raise InputError("verification needs a complete fan")
    l = build_l(loaded, config)
    checks = config.checks
    if checks is not None and ("hl" in checks or "hrm" in checks) \
            and l is None:
        raise InputError("checks hl and hrm need an l source "
                         "(--l support|file=PATH or an inline l)")
    try:
        profile = _profile(loaded, config)
        report, passed = run_checks(loaded, config, profile, l)
    except MathFailure as e:
        print(f"check failed: {e}")
        return 1
    for name in sorted(passed):
        print(f"{name}: {'pass' if passed[name] else 'FAIL'}")
    return 0 if all(passed.values()) else 1


def cmd_subdivide(config):
    loaded = load_input(config.path, config.rule)
    if loaded.pair is not None:
        pair = loaded.pair
    else:
        try:
            pair = build_distinguished_pair(loaded.fan, rule=config.rule)
        except ValueError as e:
            raise InputError(str(e))
    if config.emit_pair:
        payload = pair_to_json_dict(pair)
    else:
        payload = pair.subdivided.to_json_dict()
    text = json.dumps(payload, sort_keys=True) + "\n"
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _render_md(report):
    lines = ["# verification report", ""]
    lines.append("- h: " + _fmt_h(report["h"]))
    lines.append("- ds: " + ("true" if report["ds"] else "false"))
    lines.append("- oracle h: " + _fmt_h(report["oracle_h"]))
    lines.append("- oracle match: "
                 + ("true" if report["oracle_match"] else "false"))
    if "kunneth" in report:
        lines.append("- kunneth: "
                     + ("true" if report["kunneth"] else "false"))
    lines.append("")
    lines.append("## pairing ranks")
    lines.append("")
    lines.append("| d | rank |")
    lines.append("| - | - |")
    for d in sorted(report["pd_ranks"], key=int):
        lines.append(f"| {d} | {report['pd_ranks'][d]} |")
    if report["hl_ranks"]:
        lines.append("")
        lines.append("## Lefschetz ranks")
        lines.append("")
        lines.append("| d | rank | expected |")
        lines.append("| - | - | - |")
        for d in sorted(report["hl_ranks"], key=int):
            got, want = report["hl_ranks"][d]
            lines.append(f"| {d} | {got} | {want} |")
    if report["hrm"]:
        lines.append("")
        lines.append("## quadratic forms")
        lines.append("")
        lines.append("| d | signature | primitive dim | definite |")
        lines.append("| - | - | - | - |")
        for row in report["hrm"]:
            sig = "(%d, %d)" % tuple(row["signature"])
            lines.append("| %d | %s | %d | %s |"
                         % (row["d"], sig, row["primitive_dim"],
                            "true" if row["definite"] else "false"))
    return "\n".join(lines) + "\n"


def cmd_report(config):
    loaded = load_input(config.path, config.rule)
    if not is_complete(loaded.fan):
        raise InputError("reports need a complete fan")
    l = build_l(loaded, config)
    try:
        profile = _profile(loaded, config)
        report, passed = run_checks(loaded, config, profile, l)
    except MathFailure as e:
        print(f"check failed: {e}")
        return 1
    if config.fmt == "json":
        sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")
    else:
        sys.stdout.write(_render_md(report))
    return 0 if all(passed.values()) else 1


def make_parser():
    p = argparse.ArgumentParser(
        prog="ihfan",
        description="graded cohomology of complete fans: h-vectors, "
                    "duality, Lefschetz and signature verification")
    sub = p.add_subparsers(dest="command", required=True)
    hv = sub.add_parser("hvector", help="print the graded dimensions")
    hv.add_argument("input")
    hv.add_argument("--oracle", action="store_true",
                    help="also run the lattice recursion and compare")
    hv.add_argument("--cap", type=int, default=None,
                    help="top grading to compute (default 2n)")
    ve = sub.add_parser("verify", help="run verification checks")
    ve.add_argument("input")
    ve.add_argument("--l", dest="l_source", default=None,
                    help="l source: support or file=PATH")
    ve.add_argument("--checks", default=None,
                    help="comma-separated subset of "
                         + ",".join(ALL_CHECKS))
    sd = sub.add_parser("subdivide", help="emit the simplicial subdivision")
    sd.add_argument("input")
    sd.add_argument("--emit-pair", action="store_true",
                    help="emit the full pair dump instead of the bare fan")
    sd.add_argument("--out", default=None)
    rp = sub.add_parser("report", help="emit the full report")
    rp.add_argument("input")
    rp.add_argument("--format", dest="fmt", choices=("json", "md"),
                    default="json")
    rp.add_argument("--l", dest="l_source", default=None)
    rp.add_argument("--checks", default=None)
    return p


def main(argv=None):
    parser = make_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        checks = None
        if getattr(ns, "checks", None):
            checks = tuple(c.strip() for c in ns.checks.split(",")
                           if c.strip())
        config = JobConfig(
            path=ns.input,
            command=ns.command,
            cap=getattr(ns, "cap", None),
            l_source=getattr(ns, "l_source", None),
            checks=checks,
            fmt=getattr(ns, "fmt", "json"),
            rule=_seed_rule(),
            oracle=getattr(ns, "oracle", False),
            emit_pair=getattr(ns, "emit_pair", False),
            out=getattr(ns, "out", None),
        )
        handler = {"hvector": cmd_hvector, "verify": cmd_verify,
                   "subdivide": cmd_subdivide, "report": cmd_report}
        return handler[config.command](config)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except MathFailure as e:
        print(f"check failed: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
