"""Command-line front end: ``credalkit <command> MODEL.json [options]``.

Exit status: 0 on success, 1 when the answer is an empty credal set or a
monotonicity violation, 2 on usage or model errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import chateauneuf, cloudops, continuous, credal, intervals
from .core import (
    ONE,
    ZERO,
    Cloud,
    CredalConstraints,
    OutcomeSpace,
    PossibilityDistribution,
    cloud_constraints,
    possibility_constraints,
    to_possibility_pair,
    to_rational,
)

KINDS = ("cloud", "possibility", "genpbox", "probintervals", "randomset", "continuous_cloud")


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class ModelDocument:
    kind: str
    model: Any


# ---------------------------------------------------------------- parsing

def _require(doc: dict, key: str):
    if key not in doc:
        raise ModelError(f"missing field {key!r}")
    return doc[key]


def _breakpoints(doc: dict, key: str) -> continuous.PiecewiseLinear:
    body = _require(doc, key)
    if not isinstance(body, dict) or "breakpoints" not in body:
        raise ModelError(f"field {key!r} needs a 'breakpoints' list")
    return continuous.PiecewiseLinear(body["breakpoints"])


def _space(doc: dict) -> OutcomeSpace:
    elements = _require(doc, "elements")
    if not isinstance(elements, list):
        raise ModelError("'elements' must be a list of labels")
    return OutcomeSpace(tuple(elements))


def parse_model(text: str) -> ModelDocument:
    """Parse and validate a JSON model document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ModelError("model document must be a JSON object")
    kind = _require(doc, "kind")
    if kind not in KINDS:
        raise ModelError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    if kind == "continuous_cloud":
        pi, delta = _breakpoints(doc, "pi"), _breakpoints(doc, "delta")
        support = tuple(to_rational(v) for v in _require(doc, "support"))
        if len(support) != 2 or support != pi.support or support != delta.support:
            raise ModelError("support must match the first and last breakpoints of pi and delta")
        return ModelDocument(kind, continuous.ContinuousCloud(delta, pi))
    space = _space(doc)
    if kind == "cloud":
        model = Cloud(space, _require(doc, "delta"), _require(doc, "pi"))
    elif kind == "possibility":
        model = PossibilityDistribution(space, _require(doc, "pi"))
    elif kind == "genpbox":
        model = cloudops.GeneralizedPBox(space, _require(doc, "flow"), _require(doc, "fhigh"), doc.get("preorder"))
    elif kind == "probintervals":
        model = intervals.ProbabilityInterval(space, _require(doc, "l"), _require(doc, "u"))
    else:
        focal: dict[int, Fraction] = {}
        for entry in _require(doc, "focal"):
            event = space.event(_require(entry, "set"))
            focal[event] = focal.get(event, ZERO) + to_rational(_require(entry, "mass"))
        model = credal.MassFunction(space, focal)
    return ModelDocument(kind, model)


def _q(v: Fraction) -> str:
    return str(v)


def _by_label(space: OutcomeSpace, values) -> dict:
    return {e: _q(v) for e, v in zip(space.elements, values)}


def to_document(doc: ModelDocument) -> dict:
    m = doc.model
    if doc.kind == "continuous_cloud":
        lo, hi = m.support
        return {
            "kind": doc.kind,
            "support": [_q(lo), _q(hi)],
            "pi": {"breakpoints": [[_q(x), _q(y)] for x, y in m.pi.points]},
            "delta": {"breakpoints": [[_q(x), _q(y)] for x, y in m.delta.points]},
        }
    out: dict[str, Any] = {"kind": doc.kind, "elements": list(m.space.elements)}
    if doc.kind == "cloud":
        out["pi"] = _by_label(m.space, m.pi)
        out["delta"] = _by_label(m.space, m.delta)
    elif doc.kind == "possibility":
        out["pi"] = _by_label(m.space, m.pi)
    elif doc.kind == "genpbox":
        out["flow"] = _by_label(m.space, m.flow)
        out["fhigh"] = _by_label(m.space, m.fhigh)
        out["preorder"] = m.preorder_labels()
    elif doc.kind == "probintervals":
        out["l"] = _by_label(m.space, m.l)
        out["u"] = _by_label(m.space, m.u)
    else:
        out["focal"] = [{"set": list(m.space.labels(e)), "mass": _q(v)} for e, v in m.focal.items()]
    return out


def serialize(doc: ModelDocument) -> str:
    return json.dumps(to_document(doc), indent=2) + "\n"


# ---------------------------------------------------------------- formatting

def format_number(value, decimals: Optional[int] = None) -> str:
    if value is credal.INFEASIBLE:
        return "INFEASIBLE"
    value = to_rational(value)
    if decimals is None:
        return str(value)
    r = round(value, decimals)
    sign = "-" if r < 0 else ""
    scaled = abs(r) * 10**decimals
    whole, frac = divmod(int(scaled), 10**decimals)
    return f"{sign}{whole}.{frac:0{decimals}d}" if decimals else f"{sign}{whole}"


def _cap() -> Optional[int]:
    raw = os.environ.get("CREDAL_LP_CAP")
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ModelError(f"CREDAL_LP_CAP must be an integer, got {raw!r}") from None


def _parse_event(space: OutcomeSpace, text: str) -> int:
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        text = text[1:-1]
    return space.event(text)


def _events(space: OutcomeSpace, args) -> list[int]:
    out = [_parse_event(space, e) for e in (args.event or [])]
    if getattr(args, "event_file", None):
        with open(args.event_file, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line and not line.startswith("#"):
                    out.append(_parse_event(space, line))
    if not out:
        raise ModelError("no event given; use --event or --event-file")
    return out


# ---------------------------------------------------------------- model helpers

def _finite(doc: ModelDocument, command: str):
    if doc.kind == "continuous_cloud":
        raise ModelError(f"{command} needs a finite model, got continuous_cloud")
    return doc.model


def _as_cloud(doc: ModelDocument) -> Cloud:
    m = doc.model
    if doc.kind == "cloud":
        return m
    if doc.kind == "possibility":
        return Cloud(m.space, [ZERO] * len(m.space), m.pi)
    if doc.kind == "genpbox":
        return cloudops.genpbox_to_cloud(m)
    if doc.kind == "probintervals":
        return intervals.intervals_to_cloud(m, _cap())
    raise ModelError(f"a {doc.kind} model cannot be read as a cloud")


def _constraints(doc: ModelDocument) -> CredalConstraints:
    m = _finite(doc, "constraints")
    if doc.kind == "cloud":
        return cloud_constraints(m)
    if doc.kind == "possibility":
        return possibility_constraints(m)
    if doc.kind == "genpbox":
        return cloudops.genpbox_constraints(m)
    if doc.kind == "probintervals":
        return m.constraints()
    raise ModelError("a randomset model is given by masses, not constraint rows")


def _lower(doc: ModelDocument, event: int, oracle: str):
    m = doc.model
    if doc.kind == "randomset":
        return credal.bel(m, event)
    if oracle == "transport":
        if doc.kind == "genpbox":
            return chateauneuf.cloud_lower_via_transport(cloudops.genpbox_to_cloud(m), event)
        if doc.kind == "cloud":
            return chateauneuf.cloud_lower_via_transport(m, event)
        if doc.kind == "possibility":
            rs = chateauneuf.possibility_to_randomset(m)
            return credal.bel(rs, event)
        raise ModelError("the transport oracle needs a cloud, genpbox or possibility model")
    return credal.lp_lower(_constraints(doc), event)


def _lower_function(doc: ModelDocument):
    m = _finite(doc, "monotone")
    if doc.kind == "randomset":
        return credal.belief_function(m)
    if doc.kind == "possibility":
        return credal.necessity_function(m)
    return credal.lower_prob_function(_constraints(doc), _cap())


# ---------------------------------------------------------------- commands

def _print_table(rows: Sequence[Sequence[str]], out) -> None:
    widths = [max(len(r[k]) for r in rows) for k in range(len(rows[0]))]
    for r in rows:
        out.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")


def _value_table(space: OutcomeSpace, named: Sequence[tuple[str, Sequence]], fmt, out) -> None:
    rows = [[""] + list(space.elements)]
    rows += [[name] + [fmt(v) for v in vals] for name, vals in named]
    _print_table(rows, out)


def cmd_validate(doc, args, out, fmt):
    m = doc.model
    if doc.kind == "continuous_cloud":
        lo, hi = m.support
        out.write(f"valid continuous_cloud on [{lo}, {hi}]\n")
    else:
        out.write(f"valid {doc.kind} on {len(m.space)} elements\n")
    return 0


def cmd_nonempty(doc, args, out, fmt):
    m = _finite(doc, "nonempty")
    if doc.kind == "cloud":
        ok = cloudops.is_nonempty(m)
    elif doc.kind == "genpbox":
        ok = cloudops.is_nonempty(cloudops.genpbox_to_cloud(m))
    else:
        ok = True
    out.write("non-empty credal set\n" if ok else "empty credal set\n")
    return 0 if ok else 1


def cmd_check(doc, args, out, fmt):
    if args.what == "nonempty":
        return cmd_nonempty(doc, args, out, fmt)
    cloud = _as_cloud(doc)
    ok = cloudops.is_comonotonic(cloud)
    out.write("comonotonic\n" if ok else "not comonotonic\n")
    return 0 if ok else 1


def cmd_constraints(doc, args, out, fmt):
    cons = _constraints(doc)
    fe = cons.space.format_event
    for r in cons.rows:
        out.write(f"{fmt(r.lo)} <= P({fe(r.event)}) <= {fmt(r.hi)}\n")
    return 0


def _write_randomset(mass: credal.MassFunction, out, fmt) -> None:
    for e, v in mass.focal.items():
        out.write(f"m({mass.space.format_event(e)}) = {fmt(v)}\n")


def cmd_convert(doc, args, out, fmt):
    target = args.to
    m = _finite(doc, "convert")
    if target == "genpbox":
        result = ModelDocument("genpbox", cloudops.cloud_to_genpbox(_as_cloud(doc)))
    elif target == "cloud":
        result = ModelDocument("cloud", _as_cloud(doc))
    elif target == "randomset":
        if doc.kind == "randomset":
            result = doc
        elif doc.kind == "possibility":
            result = ModelDocument("randomset", chateauneuf.possibility_to_randomset(m))
        else:
            result = ModelDocument("randomset", cloudops.cloud_to_randomset(_as_cloud(doc)))
    else:
        upper, lower = to_possibility_pair(_as_cloud(doc))
        if args.json:
            out.write(json.dumps([to_document(ModelDocument("possibility", d)) for d in (upper, lower)], indent=2) + "\n")
        else:
            _value_table(upper.space, [("pi", upper.pi), ("1-delta", lower.pi)], fmt, out)
        return 0
    if args.json:
        out.write(serialize(result))
        return 0
    r = result.model
    if result.kind == "randomset":
        _write_randomset(r, out, fmt)
    elif result.kind == "genpbox":
        _value_table(r.space, [("fhigh", r.fhigh), ("flow", r.flow)], fmt, out)
        out.write("preorder: " + " < ".join("{" + ",".join(c) + "}" for c in r.preorder_labels()) + "\n")
    else:
        _value_table(r.space, [("pi", r.pi), ("delta", r.delta)], fmt, out)
    return 0


def _query(doc, args, out, fmt, upper: bool):
    m = _finite(doc, "probability queries")
    status = 0
    for event in _events(m.space, args):
        target = m.space.complement(event) if upper else event
        low = _lower(doc, target, args.oracle)
        if low is credal.INFEASIBLE:
            value, status = low, 1
        else:
            value = ONE - low if upper else low
        out.write(f"{m.space.format_event(event)}\t{fmt(value)}\n")
    if status:
        sys.stderr.write("empty credal set\n")
    return status


def cmd_lowprob(doc, args, out, fmt):
    return _query(doc, args, out, fmt, upper=False)


def cmd_upprob(doc, args, out, fmt):
    return _query(doc, args, out, fmt, upper=True)


def cmd_lowprob_all(doc, args, out, fmt):
    f = _lower_function(doc)
    if f is credal.INFEASIBLE:
        out.write("empty credal set\n")
        return 1
    for event, v in enumerate(f.values):
        out.write(f"{f.space.format_event(event)}\t{fmt(v)}\n")
    return 0


def cmd_monotone(doc, args, out, fmt):
    f = _lower_function(doc)
    if f is credal.INFEASIBLE:
        out.write("empty credal set\n")
        return 1
    fe = f.space.format_event
    if args.order == "2":
        v = credal.two_monotone_violation(f, _cap())
        if v is None:
            out.write("2-monotone\n")
            return 0
        out.write(f"not 2-monotone: A={fe(v.a)} B={fe(v.b)} "
                  f"P(A)+P(B) = {fmt(v.lhs)} > {fmt(v.rhs)} = P(A|B)+P(A&B)\n")
        return 1
    masses = credal.mobius_transform(f)
    negative = {e: v for e, v in masses.items() if v < 0}
    if not negative and credal.is_infinitely_monotone(f):
        out.write("infinitely monotone\n")
        return 0
    out.write("not infinitely monotone\n")
    for e, v in negative.items():
        out.write(f"m({fe(e)}) = {fmt(v)}\n")
    return 1


def cmd_violation(doc, args, out, fmt):
    cloud = _as_cloud(doc)
    if not cloudops.is_nonempty(cloud):
        out.write("empty credal set\n")
        return 1
    v = cloudops.find_2monotone_violation(cloud, _cap())
    if v is None:
        out.write("no violation: lower probability is 2-monotone\n")
        return 0
    fe = cloud.space.format_event
    out.write(f"violation: A={fe(v.a)} B={fe(v.b)} "
              f"P(A)+P(B) = {fmt(v.lhs)} > {fmt(v.rhs)} = P(A|B)+P(A&B)\n")
    return 1


def cmd_bounds(doc, args, out, fmt):
    cloud = _as_cloud(doc)
    status = 0
    for event in _events(cloud.space, args):
        if args.method == "outer":
            lo, hi = cloudops.outer_bounds(cloud, event)
        elif args.method == "inner":
            rs = cloudops.cloud_to_randomset(cloud)
            lo, hi = credal.bel(rs, event), credal.pl(rs, event)
        else:
            cons = cloud_constraints(cloud)
            lo, hi = credal.lp_lower(cons, event), credal.lp_upper(cons, event)
            if lo is credal.INFEASIBLE:
                status = 1
        out.write(f"{cloud.space.format_event(event)}\t[{fmt(lo)}, {fmt(hi)}]\n")
    return status


def cmd_from_intervals(doc, args, out, fmt):
    if doc.kind != "probintervals":
        raise ModelError("from-intervals needs a probintervals model")
    m = doc.model
    if args.method == "masson-denoeux":
        result = ModelDocument("cloud", intervals.intervals_to_cloud(m, _cap()))
        if args.json:
            out.write(serialize(result))
            return 0
        _value_table(m.space, [("pi", result.model.pi), ("delta", result.model.delta)], fmt, out)
        return 0
    if not args.order:
        raise ModelError("--method order needs --order")
    order = [s.strip() for s in args.order.split(",") if s.strip()]
    gpb = intervals.intervals_to_genpbox(m, order)
    if args.json:
        out.write(serialize(ModelDocument("genpbox", gpb)))
        return 0
    delta = cloudops.genpbox_to_cloud(gpb).delta
    _value_table(m.space, [("fhigh=pi", gpb.fhigh), ("flow", gpb.flow), ("delta", delta)], fmt, out)
    return 0


def cmd_discretize(doc, args, out, fmt):
    if doc.kind != "continuous_cloud":
        raise ModelError("discretize needs a continuous_cloud model")
    d = continuous.discretize(doc.model, args.levels, args.cut or [])
    header = ["cell"]
    if args.side in ("outer", "both"):
        header += ["outer_delta", "outer_pi"]
    if args.side in ("inner", "both"):
        header += ["inner_delta", "inner_pi"]
    rows = [header]
    for k, label in enumerate(d.space.elements):
        row = [label]
        if args.side in ("outer", "both"):
            row += [fmt(d.outer_delta[k]), fmt(d.outer_pi[k])]
        if args.side in ("inner", "both"):
            row += [fmt(d.inner_delta[k]), fmt(d.inner_pi[k])]
        rows.append(row)
    _print_table(rows, out)
    return 0


def cmd_focal(doc, args, out, fmt):
    alpha = to_rational(args.alpha)
    if doc.kind == "continuous_cloud":
        out.write(str(continuous.alpha_focal(doc.model, alpha)) + "\n")
        return 0
    cloud = _as_cloud(doc)
    if not ZERO < alpha <= ONE:
        raise ModelError("alpha must lie in (0, 1]")
    mask = sum(1 << i for i in range(len(cloud.space)) if cloud.pi[i] >= alpha and cloud.delta[i] < alpha)
    out.write(cloud.space.format_event(mask) + "\n")
    return 0


def cmd_plot_data(doc, args, out, fmt):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if doc.kind == "continuous_cloud":
        cc = doc.model
        lo, hi = cc.support
        n = args.samples
        if n < 2:
            raise ModelError("--samples must be at least 2")
        xs = set(cc.breakpoints()) | {lo + (hi - lo) * Fraction(k, n - 1) for k in range(n)}
        writer.writerow(["x", "delta", "pi"])
        for x in sorted(xs):
            writer.writerow([fmt(x), fmt(cc.delta(x)), fmt(cc.pi(x))])
    else:
        cloud = _as_cloud(doc)
        writer.writerow(["element", "delta", "pi"])
        for e, d, p in zip(cloud.space.elements, cloud.delta, cloud.pi):
            writer.writerow([e, fmt(d), fmt(p)])
    if args.output in (None, "-"):
        out.write(buf.getvalue())
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    return 0


# ---------------------------------------------------------------- wiring

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="credalkit", description="Clouds, p-boxes and credal sets with exact arithmetic.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, first=None):
        sp = sub.add_parser(name, help=help_text)
        if first:
            sp.add_argument(first[0], choices=first[1])
        sp.add_argument("model", help="JSON model file ('-' for stdin)")
        sp.add_argument("--decimal", type=int, metavar="K", help="print K rounded decimal places instead of p/q")
        sp.set_defaults(func=func)
        return sp

    def add_events(sp):
        sp.add_argument("--event", action="append", help="comma-separated labels; repeatable")
        sp.add_argument("--event-file", help="file with one event per line")

    add("validate", cmd_validate, "parse and validate a model")
    add("nonempty", cmd_nonempty, "test whether the credal set is non-empty")
    add("check", cmd_check, "run a named check", first=("what", ["nonempty", "comonotonic"]))
    add("constraints", cmd_constraints, "list the credal constraint rows")
    sp = add("convert", cmd_convert, "convert between representations")
    sp.add_argument("--to", required=True, choices=["genpbox", "cloud", "randomset", "possibility-pair"])
    sp.add_argument("--json", action="store_true", help="emit a model document")
    for name, func in (("lowprob", cmd_lowprob), ("upprob", cmd_upprob)):
        sp = add(name, func, f"exact {'lower' if name == 'lowprob' else 'upper'} probability of events")
        add_events(sp)
        sp.add_argument("--oracle", choices=["lp", "transport"], default="lp")
    add("lowprob-all", cmd_lowprob_all, "lower probability of every event")
    sp = add("monotone", cmd_monotone, "test 2- or infinite monotonicity of the lower probability")
    sp.add_argument("--order", choices=["2", "inf"], default="2")
    add("violation", cmd_violation, "find events violating 2-monotonicity of a cloud")
    sp = add("bounds", cmd_bounds, "outer, inner or exact probability bounds")
    add_events(sp)
    sp.add_argument("--method", choices=["outer", "inner", "exact"], default="exact")
    sp = add("from-intervals", cmd_from_intervals, "cloud or p-box from probability intervals")
    sp.add_argument("--method", choices=["masson-denoeux", "order"], default="masson-denoeux")
    sp.add_argument("--order", help="comma-separated total order, e.g. z,w,y,x")
    sp.add_argument("--json", action="store_true", help="emit a model document")
    sp = add("discretize", cmd_discretize, "inner/outer finite clouds of a continuous cloud")
    sp.add_argument("--levels", type=int, required=True)
    sp.add_argument("--side", choices=["inner", "outer", "both"], default="both")
    sp.add_argument("--cut", action="append", help="extra cell boundary; repeatable")
    sp = add("focal", cmd_focal, "focal set at level alpha")
    sp.add_argument("--alpha", required=True)
    sp = add("plot-data", cmd_plot_data, "CSV of delta and pi for plotting")
    sp.add_argument("-o", "--output", help="output CSV path (default stdout)")
    sp.add_argument("--samples", type=int, default=200)
    return p


def _read_model(path: str) -> ModelDocument:
    if path == "-":
        return parse_model(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    out = sys.stdout
    try:
        doc = _read_model(args.model)
        decimals = args.decimal

        def fmt(v):
            return format_number(v, decimals)

        return args.func(doc, args, out, fmt)
    except (ValueError, TypeError, KeyError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
