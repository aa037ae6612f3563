"""Command-line front end.

Mathematical verdicts (uncolorable, contradiction, ...) are ordinary output
and exit 0.  Exit status 1 means the command could not run: bad usage,
unreadable input, malformed ray files.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

from . import catalog
from .coloring import Mode, build_constraints, colorable, parity_certificate
from .critical import enumerate_critical
from .errors import BKSError
from .quantum import (
    LocalEvent,
    State,
    born,
    conditional_probability,
    event_probability,
    hardy_run,
    nonlocality_report,
    state_reduce,
)
from .rays import Ray, RaySet, enumerate_bases, format_rayset, orthogonality_graph, parse_rayset


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _frac(x: Fraction) -> str:
    return str(x)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def load_set(spec: str) -> tuple[str, RaySet]:
    if spec in catalog.set_keys():
        return spec, catalog.get(spec).ray_set
    if spec in catalog.state_keys():
        return spec, RaySet([catalog.state(spec).ray])
    if not os.path.exists(spec):
        raise UsageError(f"{spec!r} is neither a catalog key nor a file")
    return spec, parse_rayset(spec)


def load_state(spec: str) -> State:
    if spec in catalog.state_keys():
        return catalog.state(spec)
    toks = spec.replace(",", " ").replace("(", " ").replace(")", " ").split()
    if len(toks) < 2:
        raise UsageError(f"{spec!r} is neither a state key nor a component list")
    try:
        return State(Ray([Fraction(t) for t in toks]))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad state {spec!r}: {exc}") from None


def _with_drops(s: RaySet, drops: Sequence[int]) -> RaySet:
    for i in drops:
        if not 0 <= i < len(s):
            raise UsageError(f"--drop {i}: no such ray id")
    return s.subset(i for i in range(len(s)) if i not in set(drops))


def _coverage_phrase(counts: dict[int, int]) -> str:
    covered = sorted({c for c in counts.values()})
    if len(covered) == 1:
        return f"each ray covered {covered[0]}x"
    return "rays covered " + "/".join(str(c) for c in covered) + "x"


# -- subcommands -------------------------------------------------------------

def cmd_catalog(args) -> str:
    if args.action == "list":
        sets = [catalog.get(k) for k in catalog.set_keys()]
        states = {k: catalog.state(k) for k in catalog.state_keys()}
        if args.json:
            return _dump({
                "sets": [{"key": e.key, "rays": len(e.ray_set), "dim": e.ray_set.dim,
                          "notes": e.notes} for e in sets],
                "states": {k: list(st.ray) for k, st in states.items()},
            })
        lines = [f"{e.key:<8} {len(e.ray_set):>3} rays  dim {e.ray_set.dim}  {e.notes}" for e in sets]
        lines += [f"{k:<8} state {st.ray}" for k, st in states.items()]
        return "\n".join(lines) + "\n"
    if not args.key:
        raise UsageError("catalog show needs a key")
    if args.key in catalog.state_keys():
        return format_rayset(RaySet([catalog.state(args.key).ray]), header=f"state {args.key}")
    entry = catalog.get(args.key)
    return format_rayset(entry.ray_set, header=f"{entry.key}: {entry.notes}")


def cmd_graph(args) -> str:
    _, s = load_set(args.set)
    adj = orthogonality_graph(s)
    edges = sorted((i, j) for i in adj for j in adj[i] if i < j)
    if args.json:
        return _dump({
            "rays": [str(r) for r in s],
            "edges": [list(e) for e in edges],
            "degrees": [len(adj[i]) for i in range(len(s))],
        })
    lines = [f"{len(s)} rays, {len(edges)} orthogonal pairs"]
    for i, r in enumerate(s):
        lines.append(f"{i:>3} {str(r):<16} degree {len(adj[i])}: {' '.join(map(str, sorted(adj[i])))}")
    return "\n".join(lines) + "\n"


def cmd_bases(args) -> str:
    _, s = load_set(args.set)
    bases = enumerate_bases(s)
    if args.json:
        return _dump({"count": len(bases),
                      "bases": [{"ids": list(b), "rays": [str(s[i]) for i in b]} for b in bases]})
    lines = [f"{len(bases)} bases"]
    lines += [f"{k:>3} [{' '.join(map(str, b))}]  " + " ".join(str(s[i]) for i in b)
              for k, b in enumerate(bases)]
    return "\n".join(lines) + "\n"


def _certificate_obj(cs, cert):
    if cert is None:
        return None
    cov = cert.coverage(cs)
    return {
        "constraints": list(cert.constraint_indices),
        "bases": [[str(cs.universe[i]) for i in cs.sum_one[k]] for k in cert.constraint_indices],
        "coverage": [cov[i] for i in range(cs.n)],
    }


def cmd_color(args) -> str:
    _, s = load_set(args.set)
    s = _with_drops(s, args.drop)
    cs = build_constraints(s, args.mode)
    result = colorable(cs)
    cert = parity_certificate(cs)
    if args.json:
        return _dump({
            "verdict": "COLORABLE" if result else "UNCOLORABLE",
            "mode": cs.mode.value,
            "rays": cs.n,
            "bases": len(cs.sum_one),
            "pairs": len(cs.exclusivity_pairs),
            "witness": None if not result else [str(s[i]) for i, v in result.witness.items() if v],
            "parity_certificate": _certificate_obj(cs, cert),
        })
    head = f"({cs.n} rays, {len(cs.sum_one)} bases"
    if cs.mode is Mode.BASES_AND_PAIRS:
        head += f", {len(cs.exclusivity_pairs)} pairs"
    head += ")"
    if result:
        ones = [str(s[i]) for i, v in result.witness.items() if v]
        return f"COLORABLE {head}; rays valued 1: {' '.join(ones)}\n"
    line = f"UNCOLORABLE {head}"
    if cert is None:
        return line + "; no parity certificate\n"
    return (f"{line}; parity certificate: {len(cert.constraint_indices)} bases, "
            f"{_coverage_phrase(cert.coverage(cs))}\n")


def cmd_parity(args) -> str:
    _, s = load_set(args.set)
    s = _with_drops(s, args.drop)
    cs = build_constraints(s, Mode.BASES)
    cert = parity_certificate(cs)
    if args.json:
        return _dump({"rays": cs.n, "bases": len(cs.sum_one),
                      "parity_certificate": _certificate_obj(cs, cert)})
    if cert is None:
        return f"NO PARITY CERTIFICATE ({cs.n} rays, {len(cs.sum_one)} bases)\n"
    lines = [f"PARITY CERTIFICATE: {len(cert.constraint_indices)} of {len(cs.sum_one)} bases, "
             f"{_coverage_phrase(cert.coverage(cs))}"]
    for k in cert.constraint_indices:
        lines.append(" + ".join(f"v{s[i]}" for i in cs.sum_one[k]) + " = 1")
    return "\n".join(lines) + "\n"


def cmd_critical(args) -> str:
    name, s = load_set(args.set)
    modes = [Mode.BASES, Mode.BASES_AND_PAIRS] if args.mode == "both" else [Mode(args.mode)]
    censuses = [enumerate_critical(s, m, args.min, args.max, threads=args.threads) for m in modes]
    if len(censuses) == 1:
        c = censuses[0]
        if args.json:
            return c.to_json()
        lines = [f"critical sets of {name} ({c.mode}), sizes {c.size_min}..{c.size_max}: "
                 + (", ".join(f"{k}: {v}" for k, v in c.counts.items()) or "none")]
        lines += [f"{cs.size:>3} [{' '.join(map(str, cs.ray_ids))}]" for cs in c.sets]
        return "\n".join(lines) + "\n"
    discrepancy = censuses[0].counts != censuses[1].counts
    if args.json:
        return _dump({"censuses": [c.to_json_obj() for c in censuses], "discrepancy": discrepancy})
    lines = [f"{c.mode}: " + (", ".join(f"{k}: {v}" for k, v in c.counts.items()) or "none")
             for c in censuses]
    lines.append("DISCREPANCY between semantics" if discrepancy else "semantics agree")
    return "\n".join(lines) + "\n"


def cmd_reduce(args) -> str:
    _, s = load_set(args.set)
    st = load_state(args.state)
    red = state_reduce(s, st)
    cs = red.system()
    result = colorable(cs)
    cert = parity_certificate(cs)
    if args.json:
        return _dump({
            "state": str(st.ray),
            "removed": [str(s[i]) for i in red.removed],
            "kept": [str(s[i]) for i in red.kept],
            "constraints": [{"basis": c.basis_index, "rays": [str(s[i]) for i in c.members],
                             "span_ok": c.span_ok} for c in red.constraints],
            "verdict": "COLORABLE" if result else "UNCOLORABLE",
            "parity_certificate": _certificate_obj(cs, cert),
        })
    lines = [f"state {st.ray}: removed {len(red.removed)} rays, "
             f"{len(red.constraints)} constraints over {len(red.kept)} rays"]
    for c in red.constraints:
        tag = "span ok" if c.span_ok else "FLAGGED: exclusivity only"
        lines.append(" + ".join(f"v{s[i]}" for i in c.members) + f" = 1   [{tag}]")
    verdict = "COLORABLE" if result else "UNCOLORABLE"
    if cert is not None:
        verdict += (f"; parity certificate: {len(cert.constraint_indices)} constraints, "
                    f"{_coverage_phrase(cert.coverage(cs))}")
    lines.append(verdict)
    return "\n".join(lines) + "\n"


def cmd_hardy(args) -> str:
    _, s = load_set(args.set)
    pre = load_state(args.pre)
    post = load_state(args.post) if args.post else None
    run = hardy_run(s, pre, post)
    prop = run.propagation
    if args.json:
        return _dump({
            "pre": str(pre.ray),
            "post": None if post is None else str(post.ray),
            "forced": {str(s[i]): v for i, v in sorted(run.forced.items())},
            "trace": [{"round": st.round, "ray": str(s[st.ray]), "value": st.value,
                       "rule": st.rule, "source": [str(s[i]) for i in st.source]}
                      for st in prop.trace],
            "conflicts": [{"kind": c.kind, "rays": [str(s[i]) for i in c.rays]}
                          for c in prop.conflicts],
            "verdict": "CONTRADICTION" if run.contradiction else "NO CONTRADICTION",
        })
    lines = ["forced: " + ", ".join(f"v{s[i]}={v}" for i, v in sorted(run.forced.items()))]
    for st in prop.trace:
        via = " + ".join(f"v{s[i]}" for i in st.source)
        lines.append(f"round {st.round}: v{s[st.ray]}={st.value}  ({st.rule}: {via})")
    for c in prop.conflicts:
        lines.append(f"clash ({c.kind}): " + ", ".join(str(s[i]) for i in c.rays))
    lines.append("CONTRADICTION" if run.contradiction else "NO CONTRADICTION")
    return "\n".join(lines) + "\n"


def cmd_prob(args) -> str:
    st = load_state(args.state)
    try:
        if args.ray:
            target = load_state(args.ray).ray
            what, p = f"ray {target}", born(st, target)
        elif args.event:
            event = LocalEvent.parse(args.event)
            if args.given:
                given = LocalEvent.parse(args.given)
                what, p = f"{event} | {given}", conditional_probability(st, event, given)
            else:
                what, p = str(event), event_probability(st, event)
        else:
            raise UsageError("prob needs --ray or --event")
    except ValueError as exc:
        if isinstance(exc, BKSError):
            raise
        raise UsageError(str(exc)) from None
    if args.json:
        return _dump({"state": str(st.ray), "query": what, "probability": _frac(p)})
    return f"P({what}) = {p}\n"


def cmd_report(args) -> str:
    rec = nonlocality_report(load_state(args.pre), load_state(args.post))
    ev = rec.events
    rows = [
        ("p34", f"P({ev['c1']} | {ev['b2']})", rec.p34),
        ("p35", f"P({ev['c2']} | {ev['a1']})", rec.p35),
        ("p36", f"P({ev['c1']}, {ev['c2']})", rec.p36),
        ("p37", f"P({ev['a1']}, {ev['b2']})", rec.p37),
    ]
    if args.json:
        return _dump({
            "pre": str(rec.pre.ray), "post": str(rec.post.ray),
            **{k: _frac(v) for k, _, v in rows},
            "events": {k: str(v) for k, v in ev.items()},
            "local_values": [{"particle": lv.particle, "ray": str(lv.ray), "value": lv.value,
                              "reason": lv.reason} for lv in rec.local_values],
            "hardy": rec.is_hardy,
        })
    lines = [f"{k}={v}   {label}" for k, label, v in rows]
    lines += [f"v{lv.ray}^({lv.particle})={lv.value}   {lv.reason}" for lv in rec.local_values]
    lines.append("HARDY PATTERN" if rec.is_hardy else "no Hardy pattern")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bksbench", description="Kochen-Specker proof workbench")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="emit JSON")
        sp.set_defaults(func=func)
        return sp

    sp = add("catalog", cmd_catalog, "list or show built-in ray sets and states")
    sp.add_argument("action", choices=["list", "show"])
    sp.add_argument("key", nargs="?")

    for name, func, help_ in [("graph", cmd_graph, "orthogonality graph"),
                              ("bases", cmd_bases, "complete orthogonal bases")]:
        sp = add(name, func, help_)
        sp.add_argument("--set", required=True, help="catalog key or ray file")

    sp = add("color", cmd_color, "decide colorability")
    sp.add_argument("--set", required=True)
    sp.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.BASES.value)
    sp.add_argument("--drop", type=int, action="append", default=[], metavar="ID",
                    help="remove ray ID before checking (repeatable)")

    sp = add("parity", cmd_parity, "GF(2) parity certificate")
    sp.add_argument("--set", required=True)
    sp.add_argument("--drop", type=int, action="append", default=[], metavar="ID")

    sp = add("critical", cmd_critical, "census of critical subsets")
    sp.add_argument("--set", required=True)
    sp.add_argument("--min", type=int, default=1)
    sp.add_argument("--max", type=int, default=None)
    sp.add_argument("--mode", choices=[m.value for m in Mode] + ["both"], default=Mode.BASES.value)
    sp.add_argument("--threads", type=int, default=1)

    sp = add("reduce", cmd_reduce, "state-specific reduction")
    sp.add_argument("--set", required=True)
    sp.add_argument("--state", required=True)

    sp = add("hardy", cmd_hardy, "pre/postselection propagation")
    sp.add_argument("--set", required=True)
    sp.add_argument("--pre", required=True)
    sp.add_argument("--post")

    sp = add("prob", cmd_prob, "Born probabilities")
    sp.add_argument("--state", required=True)
    sp.add_argument("--ray")
    sp.add_argument("--event", help="local event such as z1- or x2+")
    sp.add_argument("--given")

    sp = add("report", cmd_report, "Hardy nonlocality record")
    sp.add_argument("--pre", required=True)
    sp.add_argument("--post", required=True)
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be >= 1")
        out.write(args.func(args))
    except UsageError as exc:
        err.write(f"{exc}\n")
        return 1
    except (BKSError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())
