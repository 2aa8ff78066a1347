"""Command-line front end.

    extrafun eval "sin(x)^2" --x 0.5 --n 3
    extrafun equiv --f "(1/2)^n*sin(2^n*x)" --g 0 --family compact-sup:0:1
    extrafun diff --f "x^n" --indices 1,2,3
    extrafun demo irregularity-compact
    extrafun check all

Every command also takes ``--config FILE`` (TOML), ``--window START:END:EPS``
and ``--format text|csv``.  Flags override the config file.

Exit codes: 0 success / Holds, 1 Fails, 2 bad input (syntax, config),
3 domain error, 4 Inconclusive.
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import bundle, checks, hyperspace as hs, topology as tp
from .errors import (DomainError, ExprSyntaxError, ExtrafunError, OutOfDomain,
                     UndefinedDerivative)
from .expr import eval_expr, parse, to_source
from .seminorm import absolute, compact_sup, pointwise, test_integral

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

EXIT_OK, EXIT_FAILS, EXIT_INPUT, EXIT_DOMAIN, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4
VERDICT_EXIT = {hs.Verdict.HOLDS: EXIT_OK, hs.Verdict.FAILS: EXIT_FAILS,
                hs.Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}
DEMOS = ("irregularity-compact", "irregularity-pointwise", "nonadditive-section",
         "hausdorff-witness", "smoothing")
SUITE_NAMES = (*checks.SUITES, "all")


class ConfigError(ExtrafunError, ValueError):
    """Invalid run configuration."""


# -------------------------------------------------------------------- config

_KEYS = {
    "": {"family", "window", "f", "g", "section", "eval", "diff", "demo", "check", "format"},
    "family": {"kind", "intervals", "points", "grid", "tests", "a", "b", "quad_nodes", "label"},
    "window": {"start", "end", "epsilon"},
    "seq": {"kind", "src", "head", "tail"},
    "section": {"kind", "basis", "cap", "scale", "overrides"},
    "eval": {"src", "x", "n"},
    "diff": {"indices", "compare", "max_scan"},
    "demo": {"name"},
    "check": {"suite"},
}


def _reject_unknown(table: dict, kind: str, where: str):
    extra = set(table) - _KEYS[kind]
    if extra:
        raise ConfigError(f"unknown key(s) in {where or 'config'}: {', '.join(sorted(extra))}")


@dataclass
class RunConfig:
    """Validated settings for one command."""

    family: object = None
    window: hs.Window | None = None
    f: hs.FunSeq | None = None
    g: hs.FunSeq | None = None
    section: dict = field(default_factory=lambda: {"kind": "rep"})
    eval: dict = field(default_factory=dict)
    diff: dict = field(default_factory=dict)
    demo: str | None = None
    check: str | None = None
    format: str = "text"


def family_from_table(t: dict):
    _reject_unknown(t, "family", "[family]")
    kind = t.get("kind")
    label = t.get("label", "")
    if kind == "compact-sup":
        return compact_sup([tuple(iv) for iv in t.get("intervals", [[0, 1]])], t.get("grid", 1001), label)
    if kind == "pointwise":
        return pointwise(t["points"], label)
    if kind == "test-integral":
        return test_integral(t["tests"], t.get("a", 0), t.get("b", 1), t.get("quad_nodes", 128), label)
    if kind == "absolute":
        return absolute(label)
    raise ConfigError(f"unknown family kind {kind!r}")


def family_from_flag(text: str):
    """``compact-sup:0:1[;a:b...]``, ``pointwise:0.3,1.1`` or ``absolute``."""
    kind, _, rest = text.partition(":")
    try:
        if kind == "compact-sup":
            intervals = [tuple(float(v) for v in part.split(":")) for part in rest.split(";")] if rest else [(0, 1)]
            return compact_sup(intervals)
        if kind == "pointwise":
            return pointwise([float(v) for v in rest.split(",")])
        if kind == "absolute":
            return absolute()
    except ValueError as exc:
        raise ConfigError(f"bad family {text!r}: {exc}") from exc
    raise ConfigError(f"unknown family {text!r}; use compact-sup:A:B, pointwise:X,Y or absolute")


def seq_from_table(t, where) -> hs.FunSeq:
    if isinstance(t, str):
        return hs.ExprSeq(parse(t))
    _reject_unknown(t, "seq", where)
    kind = t.get("kind", "expr")
    if kind == "expr":
        return hs.ExprSeq(parse(t["src"]))
    if kind == "list":
        return hs.ListSeq(tuple(parse(h) for h in t["head"]), parse(t["tail"]))
    raise ConfigError(f"unknown sequence kind {kind!r} in {where}")


def load_config(path: str | None) -> RunConfig:
    cfg = RunConfig()
    if not path:
        return cfg
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    _reject_unknown(data, "", "")
    if "family" in data:
        cfg.family = family_from_table(data["family"])
    if "window" in data:
        _reject_unknown(data["window"], "window", "[window]")
        try:
            cfg.window = hs.Window(**data["window"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad [window]: {exc}") from exc
    for key in ("f", "g"):
        if key in data:
            setattr(cfg, key, seq_from_table(data[key], f"[{key}]"))
    if "section" in data:
        _reject_unknown(data["section"], "section", "[section]")
        cfg.section = data["section"]
    for key in ("eval", "diff"):
        if key in data:
            _reject_unknown(data[key], key, f"[{key}]")
            setattr(cfg, key, data[key])
    if "demo" in data:
        _reject_unknown(data["demo"], "demo", "[demo]")
        cfg.demo = data["demo"].get("name")
    if "check" in data:
        _reject_unknown(data["check"], "check", "[check]")
        cfg.check = data["check"].get("suite")
    if "format" in data:
        cfg.format = data["format"]
    return cfg


def build_section(table: dict, family) -> bundle.Section:
    kind = table.get("kind", "rep")
    if kind == "rep":
        return bundle.RepSection()
    if kind == "smoothing":
        return bundle.SmoothingSection(scale=table.get("scale", 1.0), cap=table.get("cap", bundle.SMOOTHING_CAP))
    if kind == "basis-linear":
        pairs = []
        for j, item in enumerate(table.get("basis", [])):
            H = hs.project(seq_from_table(item["class"], f"basis[{j}].class"), family)
            pairs.append((H, seq_from_table(item.get("rep", item["class"]), f"basis[{j}].rep")))
        return bundle.BasisLinearSection(tuple(pairs))
    if kind == "patched":
        pairs = []
        for j, item in enumerate(table.get("overrides", [])):
            H = hs.project(seq_from_table(item["class"], f"overrides[{j}].class"), family)
            pairs.append((H, seq_from_table(item["rep"], f"overrides[{j}].rep")))
        return bundle.PatchedSection(bundle.RepSection(), tuple(pairs))
    raise ConfigError(f"unknown section kind {kind!r}")


# ------------------------------------------------------------------- output

class Report:
    """Collects text lines and trace rows; prints one or the other."""

    def __init__(self, fmt: str):
        if fmt not in ("text", "csv"):
            raise ConfigError(f"unknown format {fmt!r}")
        self.fmt = fmt
        self.lines = []
        self.rows = []

    def say(self, line=""):
        self.lines.append(str(line))

    def traces(self, label, decision: hs.Decision, every: int = 8):
        for t in decision.traces:
            self.say(f"  {label} probe {t.probe}: head max {t.head_max:.3g}, "
                     f"tail max {t.tail_max:.3g} at i={t.tail_argmax} (bound {t.bound:g})")
            shown = [(i, v) for k, (i, v) in enumerate(zip(t.indices, t.values)) if k % every == 0]
            self.say("    " + "  ".join(f"i={i}:{v:.3g}" for i, v in shown))
            for i, v in zip(t.indices, t.values):
                self.rows.append((label, str(t.probe), i, repr(v), repr(t.bound)))

    def row(self, *values):
        self.rows.append(values)

    def emit(self, out):
        if self.fmt == "text":
            out.write("\n".join(self.lines) + "\n")
        else:
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerows(self.rows)
            out.write(buf.getvalue())


# ----------------------------------------------------------------- commands

def _window(cfg: RunConfig, family):
    return cfg.window or hs.default_window(family)


def cmd_eval(cfg: RunConfig, rep: Report) -> int:
    src = cfg.eval.get("src")
    if src is None:
        raise ConfigError("eval needs an expression")
    e = parse(src)
    value = eval_expr(e, float(cfg.eval.get("x", 0.0)), int(cfg.eval.get("n", 1)))
    rep.say(repr(value))
    rep.row("value", repr(value))
    return EXIT_OK


def cmd_equiv(cfg: RunConfig, rep: Report) -> int:
    if cfg.f is None:
        raise ConfigError("equiv needs a sequence f")
    family = cfg.family or compact_sup([(0, 1)])
    g = cfg.g if cfg.g is not None else hs.ExprSeq("0")
    w = _window(cfg, family)
    d = hs.equivalent(cfg.f, g, family, w)
    rep.say(f"f = {cfg.f}")
    rep.say(f"g = {g}")
    rep.say(f"family {family.label}, window {w}")
    rep.say(f"verdict: {d}")
    rep.row("command", "probe", "index", "value", "bound")
    rep.traces("f-g", d)
    return VERDICT_EXIT[d.verdict]


def cmd_diff(cfg: RunConfig, rep: Report) -> int:
    if cfg.f is None:
        raise ConfigError("diff needs a sequence f")
    family = cfg.family or compact_sup([(0, 1)])
    section = build_section(cfg.section, family)
    F = hs.project(cfg.f, family)
    D = bundle.sectional_derivative(section, F, cfg.diff.get("max_scan", bundle.DEFAULT_MAX_SCAN))
    rep.say(f"section {section}, F = {F}")
    rep.say(f"derivative representative: {D.rep}")
    rep.row("index", "term")
    for i in cfg.diff.get("indices", [1, 2, 3]):
        term = D.rep.term(int(i))
        text = to_source(term) if len(str(term)) < 400 else repr(term)
        rep.say(f"  term {i}: {text}")
        rep.row(i, text)
    if "compare" in cfg.diff:
        other = seq_from_table(cfg.diff["compare"], "[diff].compare")
        d = hs.equivalent(D.rep, other, family, _window(cfg, family))
        rep.say(f"against {other}: {d}")
        rep.traces("derivative-compare", d)
        return VERDICT_EXIT[d.verdict]
    return EXIT_OK


def _demo_irregularity(family, w, rep) -> int:
    r = bundle.irregularity_demo(family, w)
    rep.say(f"f = {r.f}, g = {r.g}, family {family.label}, window {w}")
    rep.say(f"f ~ g: {r.equivalence}")
    rep.traces("f-g", r.equivalence)
    rep.say(f"f' = {r.df}, g' = {r.dg}")
    rep.say(f"f' ~ g': {r.derivative}")
    rep.traces("df-dg", r.derivative)
    rep.say("the zero class gets derivative 0 or the class of f' depending on the representative picked")
    ok = r.pattern == (hs.Verdict.HOLDS, hs.Verdict.FAILS)
    rep.say(f"pattern (Holds, Fails) reproduced: {ok}")
    return EXIT_OK if ok else EXIT_FAILS


def _demo_nonadditive(rep) -> int:
    r = bundle.nonadditive_patched_section()
    one, two = hs.hn(1), hs.hn(2)
    lhs = hs.seq_add(r.apply(one), r.apply(one))
    rhs = r.apply(two)
    rep.say("section: stored representatives, except r(2) = (2 + 1/n)")
    rep.row("index", "r(1)+r(1)", "r(2)")
    for i in range(1, 6):
        a, b = float(lhs.values(i, [0.0])[0]), float(rhs.values(i, [0.0])[0])
        rep.say(f"  i={i}: r(1)+r(1) = {a:.6g}, r(2) = {b:.6g}")
        rep.row(i, repr(a), repr(b))
    d = bundle.check_section_additivity(r, one, one)
    rep.say(f"r(1 + 1) = r(1) + r(1) as sequences: {d}")
    law = hs.project(rhs, two.family).equals(two)
    rep.say(f"section law on 2 (classes agree): {law}")
    ok = d.fails and law.holds
    rep.say(f"section is not additive: {ok}")
    return EXIT_OK if ok else EXIT_FAILS


def _demo_hausdorff(w, rng, rep) -> int:
    F, G = hs.zero(checks.UNIT), hs.project("cos(2^n*x)", checks.UNIT)
    wit = tp.separation_witness(F, G, w)
    rep.say(f"F = {F}, G = {G}")
    rep.say(f"probe {wit.probe}, gap k = {wit.gap:.6g}, radius k/4 = {wit.radius:.6g}, "
            f"{len(wit.witness_indices)} witness indices")
    cands = tp.sample_candidates(F, G, 100, rng)
    both = sum(tp.in_both(wit, F, G, c) for c in cands)
    near_f = sum(tp.in_uniform_nbhd_seq(c, F.rep, wit.neighbourhood(), F.family, wit.window).holds for c in cands)
    near_g = sum(tp.in_uniform_nbhd_seq(c, G.rep, wit.neighbourhood(), G.family, wit.window).holds for c in cands)
    rep.say(f"100 sampled sequences: {near_f} near F, {near_g} near G, {both} near both")
    rep.row("probe", "gap", "radius", "in_both")
    rep.row(str(wit.probe), repr(wit.gap), repr(wit.radius), both)
    return EXIT_OK if both == 0 else EXIT_FAILS


def _demo_smoothing(w, rep) -> int:
    Q = compact_sup([(-1, 1)])
    F = hs.embed("sin(x)", Q)
    section = bundle.SmoothingSection()
    rep.say(f"F = {F}, section {section}: term i is the degree min(2^i, 2^14) "
            "Bernstein polynomial on [-i, i]")
    rep.row("index", "degree", "sup error on [-1,1]")
    for i in (4, 8, 12, 14, 16, 24, 32, 48, 64):
        err = bundle.smoothing_error(F, section, i, (-1, 1))
        rep.say(f"  i={i:2d} degree {section.degrees(i):6d}: sup error {err:.3g}")
        rep.row(i, section.degrees(i), repr(err))
    try:
        D = bundle.sectional_derivative(section, F)
        rep.say(f"sectional derivative defined: {D.rep}")
        defined = True
    except UndefinedDerivative as exc:
        rep.say(f"sectional derivative undefined: {exc}")
        defined = False
    d = hs.project(section.apply(F), Q).equals(F, w)
    rep.say(f"smoothed representative in the class of F: {d}")
    rep.traces("smoothed-F", d)
    return EXIT_OK if defined and d.holds else EXIT_FAILS


def cmd_demo(cfg: RunConfig, rep: Report, rng) -> int:
    name = cfg.demo
    if name not in DEMOS:
        raise ConfigError(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}")
    if name == "irregularity-compact":
        return _demo_irregularity(checks.UNIT, _window(cfg, checks.UNIT), rep)
    if name == "irregularity-pointwise":
        return _demo_irregularity(checks.POINTS, _window(cfg, checks.POINTS), rep)
    if name == "nonadditive-section":
        return _demo_nonadditive(rep)
    if name == "hausdorff-witness":
        return _demo_hausdorff(cfg.window, rng, rep)
    return _demo_smoothing(cfg.window, rep)


def cmd_check(cfg: RunConfig, rep: Report, rng) -> int:
    name = cfg.check or "all"
    if name not in SUITE_NAMES:
        raise ConfigError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")
    rows = checks.run_suite(name, rng)
    width = max(len(r.name) for r in rows)
    rep.row("suite", "property", "passed", "total", "ok")
    for r in rows:
        mark = "ok" if r.ok else "VIOLATED"
        rep.say(f"{r.suite:18s} {r.name:{width}s} {r.passed:3d}/{r.total:<3d} {mark}")
        rep.row(r.suite, r.name, r.passed, r.total, r.ok)
    bad = sum(not r.ok for r in rows)
    rep.say(f"{len(rows) - bad}/{len(rows)} properties hold")
    return EXIT_OK if bad == 0 else EXIT_FAILS


# --------------------------------------------------------------------- main

def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML run configuration")
    common.add_argument("--window", help="START:END:EPS")
    common.add_argument("--format", choices=("text", "csv"))
    common.add_argument("--family", help="compact-sup:A:B[;C:D], pointwise:X,Y,... or absolute")

    p = argparse.ArgumentParser(prog="extrafun", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    e = sub.add_parser("eval", parents=[common], help="evaluate an expression")
    e.add_argument("expr", nargs="?")
    e.add_argument("--x", type=float)
    e.add_argument("--n", type=int)
    q = sub.add_parser("equiv", parents=[common], help="decide equivalence of two sequences")
    q.add_argument("--f")
    q.add_argument("--g")
    d = sub.add_parser("diff", parents=[common], help="sectional derivative")
    d.add_argument("--f")
    d.add_argument("--section", choices=("rep", "smoothing"))
    d.add_argument("--indices", help="comma-separated term indices to print")
    d.add_argument("--compare", help="sequence to compare the derivative with")
    m = sub.add_parser("demo", parents=[common], help="run a named scenario")
    m.add_argument("name", nargs="?", choices=DEMOS)
    c = sub.add_parser("check", parents=[common], help="run a property suite")
    c.add_argument("suite", nargs="?", choices=SUITE_NAMES)
    return p


def _apply_flags(cfg: RunConfig, args) -> RunConfig:
    if args.window:
        try:
            cfg.window = hs.Window.parse(args.window)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if args.format:
        cfg.format = args.format
    if args.family:
        cfg.family = family_from_flag(args.family)
    if args.command == "eval":
        if args.expr is not None:
            cfg.eval["src"] = args.expr
        if args.x is not None:
            cfg.eval["x"] = args.x
        if args.n is not None:
            cfg.eval["n"] = args.n
    if getattr(args, "f", None) is not None:
        cfg.f = hs.ExprSeq(parse(args.f))
    if getattr(args, "g", None) is not None:
        cfg.g = hs.ExprSeq(parse(args.g))
    if args.command == "diff":
        if args.section:
            cfg.section = {"kind": args.section}
        if args.indices:
            cfg.diff["indices"] = [int(v) for v in args.indices.split(",")]
        if args.compare:
            cfg.diff["compare"] = args.compare
    if args.command == "demo" and args.name:
        cfg.demo = args.name
    if args.command == "check" and args.suite:
        cfg.check = args.suite
    return cfg


def seeded_rng() -> np.random.Generator:
    """RNG seeded from EXTRAFUN_SEED (0 when unset, so reports are repeatable)."""
    return np.random.default_rng(int(os.environ.get("EXTRAFUN_SEED", "0")))


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = make_parser().parse_args(argv)
    try:
        cfg = _apply_flags(load_config(args.config), args)
        rep = Report(cfg.format)
        rng = seeded_rng()
        if args.command == "eval":
            code = cmd_eval(cfg, rep)
        elif args.command == "equiv":
            code = cmd_equiv(cfg, rep)
        elif args.command == "diff":
            code = cmd_diff(cfg, rep)
        elif args.command == "demo":
            code = cmd_demo(cfg, rep, rng)
        else:
            code = cmd_check(cfg, rep, rng)
    except ExprSyntaxError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConfigError, OutOfDomain, UndefinedDerivative, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ExtrafunError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rep.emit(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
