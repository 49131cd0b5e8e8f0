"""Command-line surface: load presentations, run constructions and theorem
verifications, print deterministic reports.

Exit status 0 when every check passes, 1 when one fails (its name goes to
standard error), 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .core import (AinfCategory, AinfCocategory, Category, DanglingId, DegreeMismatch, ParseError, Unit,
                   check_relations, collapse_grading, load_map, load_presentation, parse_object)
from .duality import InfiniteSlice, NotAdamsConnected, bar, check_bar_cobar, cobar, cocategory_complex, koszul_E
from .f2linalg import NotADifferential, betti
from .functors import adjunction_lift, check_functor, identity_functor
from .localization import (CapTooSmall, HypothesisFailed, NoCertificate, NoStabilization, localized_hom)
from .mapping_torus import (BimoduleMapF, IncompatibleSplitting, NotStrict, check_cylinder, coinvariants, cylinder,
                            mapping_torus, mapping_torus_small, shift_functor, verify_thm_A, verify_thm_B)
from .modules import Yoneda, value_complex

__all__ = ["RunConfig", "Report", "run", "render_report", "main", "COMMANDS", "SCHEMA"]

SCHEMA = "artifact-report/1"

COMMANDS = ("check-relations", "check-functor", "homology", "grothendieck", "cylinder", "mapping-torus",
            "coinvariants", "localize", "bar", "cobar", "koszul", "verify-thm-a", "verify-thm-b",
            "verify-bar-cobar")


class UsageError(ValueError):
    pass


def _range(s: str) -> tuple[int, int]:
    try:
        a, b = s.split("..")
        lo, hi = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {s!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {s!r}")
    return lo, hi


@dataclass
class RunConfig:
    command: str
    inputs: list
    window: tuple | None = None  # Adams range
    degrees: tuple = (-1, 2)  # cohomological range
    cap: int | None = None  # word cap (raw localization route)
    adams_cap: int = 3
    m: int = 0
    f: str | None = None
    enlarge: str | None = None
    label: str = "X"
    x: str | None = None
    y: str | None = None
    invert: list = field(default_factory=list)
    method: str = "reduced"
    functor: str = "shift"
    max_arity: int | None = None
    output: str | None = None
    format: str = "human"
    timing: bool = False

    def validate(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if not self.inputs:
            raise UsageError("no input file")
        if self.cap is not None and self.cap < 1:
            raise UsageError("--cap must be positive")
        if self.adams_cap < 0:
            raise UsageError("--adams-cap must be non-negative")
        if self.window is not None and self.window[0] < 0:
            raise UsageError("the Adams window starts at 0 or above")
        if self.format not in ("human", "machine"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.method not in ("reduced", "raw", "both"):
            raise UsageError(f"unknown method {self.method!r}")
        if self.method in ("raw", "both") and self.cap is None:
            raise UsageError("the raw route needs --cap")

    def echo(self) -> dict:
        d = dataclasses.asdict(self)
        d.pop("output")
        d.pop("format")
        d.pop("timing")
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in d.items()}


@dataclass
class Report:
    command: str
    config: dict
    inputs: list  # [{"path", "sha256"}]
    checks: list = field(default_factory=list)  # [{"name", "ok", "detail"}]
    tables: dict = field(default_factory=dict)  # name -> {"p,j": n}
    certificates: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)
    wall_time: float | None = None
    version: str = __version__
    schema: str = SCHEMA

    def check(self, name: str, ok, detail: str = ""):
        self.checks.append({"name": name, "ok": bool(ok), "detail": str(detail)})

    def table(self, name: str, t: dict):
        self.tables[name] = {f"{b[0]},{b[1]}": int(v) for b, v in sorted(t.items())}

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks)

    def first_failure(self):
        return next((c for c in self.checks if not c["ok"]), None)

    def as_dict(self) -> dict:
        d = {
            "schema": self.schema, "version": self.version, "command": self.command, "config": self.config,
            "inputs": self.inputs, "checks": self.checks, "tables": self.tables,
            "certificates": self.certificates, "info": self.info, "ok": self.ok,
        }
        if self.wall_time is not None:
            d["wall_time"] = round(self.wall_time, 3)
        return d


def render_report(r: Report, fmt: str = "machine") -> str:
    """Machine format: sorted JSON.  Human format: the same data as text
    tables (bidegree grids with rows p and columns Adams j)."""
    if fmt == "machine":
        return json.dumps(r.as_dict(), sort_keys=True, indent=2) + "\n"
    out = [f"artifact {r.version} ({r.schema})", f"command: {r.command}"]
    for inp in r.inputs:
        out.append(f"input: {inp['path']} sha256:{inp['sha256'][:16]}")
    for k, v in sorted(r.info.items()):
        out.append(f"info {k}: {v}")
    out.append("checks:")
    for c in r.checks:
        out.append(f"  {'PASS' if c['ok'] else 'FAIL'}  {c['name']}" + (f"  [{c['detail']}]" if c["detail"] else ""))
    for name, t in sorted(r.tables.items()):
        out.append(f"table {name}:")
        cells = {tuple(int(v) for v in k.split(",")): n for k, n in t.items()}
        ps = sorted({p for p, _ in cells})
        js = sorted({j for _, j in cells})
        out.append("  p\\j " + " ".join(f"{j:>3}" for j in js))
        for p in ps:
            row = " ".join(f"{cells[(p, j)]:>3}" if (p, j) in cells else "  ." for j in js)
            out.append(f"  {p:>3} " + row)
    for k, v in sorted(r.certificates.items()):
        out.append(f"certificate {k}: {v}")
    if r.wall_time is not None:
        out.append(f"wall time: {r.wall_time:.3f}s")
    out.append(f"result: {'PASS' if r.ok else 'FAIL'}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# commands


def _load(path: str):
    try:
        return load_presentation(Path(path).read_text())
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except ParseError as e:
        raise UsageError(f"{path}: {e}") from None
    except (DegreeMismatch, DanglingId, ValueError) as e:
        raise UsageError(f"{path}: {e}") from None


def _category(path: str) -> AinfCategory:
    c = _load(path)
    if not isinstance(c, AinfCategory):
        raise UsageError(f"{path} is a cocategory; this command needs a category")
    return c


def _cocategory(path: str) -> AinfCocategory:
    c = _load(path)
    if not isinstance(c, AinfCocategory):
        raise UsageError(f"{path} is a category; this command needs a cocategory")
    return c


def _obj(c, tok: str | None, default):
    if tok is None:
        return default
    try:
        o = parse_object(tok, bool(getattr(c, "labels", None)))
    except ValueError as e:
        raise UsageError(str(e)) from None
    objs = c.objects() if callable(c.objects) else c.objects
    if o not in objs:
        raise UsageError(f"object {tok} is not in the presentation")
    return o


def _bids(cfg: RunConfig, adams_default) -> list:
    lo, hi = cfg.window if cfg.window else adams_default
    return [(p, j) for p in range(cfg.degrees[0], cfg.degrees[1] + 1) for j in range(lo, hi + 1)]


def _hom_betti(c: Category, x, y, bids) -> dict:
    return betti(value_complex(Yoneda(c, y), x), bids)


def _adams_span(c) -> tuple:
    js = [b[2][1] for b in c.gens.values()] if hasattr(c, "gens") else []
    return (0, max([abs(j) for j in js], default=0))


def cmd_check_relations(cfg, r):
    c = _load(cfg.inputs[0])
    if isinstance(c, AinfCocategory):
        r.check("co-A-infinity relations", *_verdict(c.check()))
        return
    r.check("A-infinity relations", *_verdict(check_relations(c, cfg.max_arity)))
    if c.augmentation is not None:
        r.check("augmentation compatible with mu^1, mu^2", *_verdict(c.augmentation.check(c)))


def _verdict(v):
    return v.ok, v.summary()


def cmd_check_functor(cfg, r):
    c = _category(cfg.inputs[0])
    if cfg.functor == "shift":
        F = shift_functor(c)
    elif cfg.functor == "identity":
        F = identity_functor(c)
    elif cfg.functor == "lift":
        F = adjunction_lift(identity_functor(collapse_grading(c, cfg.m)), c, cfg.m, cfg.adams_cap)
    else:
        raise UsageError(f"unknown functor {cfg.functor!r} (shift, identity, lift)")
    r.info["functor"] = F.name
    r.check(f"{F.name} satisfies the functor equations", *_verdict(check_functor(F, cfg.max_arity)))


def cmd_homology(cfg, r):
    c = _load(cfg.inputs[0])
    if isinstance(c, AinfCocategory):
        cc = cocategory_complex(c, cfg.adams_cap)
        r.table("H(C, delta^1)", betti(cc, cc.bidegrees()))
        r.check("d o d = 0", True)
        return
    objs = c.objects()
    x = _obj(c, cfg.x, objs[0])
    y = _obj(c, cfg.y, x)
    r.info["hom"] = f"{x} -> {y}"
    r.table(f"H {c.name}({x}, {y})", _hom_betti(c, x, y, _bids(cfg, _adams_span(c))))
    r.check("d o d = 0", True)


def cmd_grothendieck(cfg, r):
    c = _category(cfg.inputs[0])
    pres = mapping_torus_small(c)
    g = pres.cat
    r.info["objects"] = len(g.objects())
    r.info["adjacent units"] = len(pres.morphisms)
    r.check("Grothendieck construction: A-infinity relations", *_verdict(check_relations(g, cfg.max_arity)))


def cmd_cylinder(cfg, r):
    c = _category(cfg.inputs[0])
    cyl = cylinder(c)
    r.check("cylinder: A-infinity relations", *_verdict(check_relations(cyl.cat, cfg.max_arity)))
    r.check("pi is a functor", *_verdict(check_functor(cyl.pi)))
    objs = c.objects()
    x = _obj(c, cfg.x, objs[0])
    ys = [_obj(c, cfg.y, None)] if cfg.y else list(objs)
    bids = _bids(cfg, (0, 2))
    for (a, b), (loc, base, cert) in check_cylinder(cyl, [(x, y) for y in ys], bids).items():
        name = f"Cyl[W^-1](bot {a}, bot {b}) = A({a}, {b})"
        r.check(name, loc == base)
        r.certificates[name] = str(cert)


def cmd_mapping_torus(cfg, r):
    c = _category(cfg.inputs[0])
    mt = mapping_torus(c)
    r.info["objects of G"] = len(mt.G.objects())
    r.info["W_G"] = len(mt.W)
    r.check("G: A-infinity relations", *_verdict(check_relations(mt.G, cfg.max_arity)))
    x = mt.obj("dot", 0, cfg.label)
    hi = c.window[1] if c.window else 2
    loc = mt.hom(x, x, _bids(cfg, (0, hi)), method=cfg.method if cfg.method != "both" else "reduced",
                 cap=cfg.cap)
    r.table("H End(dot^0)", loc.betti)
    r.certificates["H End(dot^0)"] = str(loc.certificate)


def cmd_coinvariants(cfg, r):
    c = _category(cfg.inputs[0])
    ac = coinvariants(c)
    r.check("A_tau: A-infinity relations", *_verdict(check_relations(ac, cfg.max_arity)))
    hi = c.window[1] if c.window else 2
    for e in ac.objects():
        r.table(f"A_tau({e}, {e})", _hom_betti(ac, e, e, _bids(cfg, (0, hi))))


def cmd_localize(cfg, r):
    c = _category(cfg.inputs[0])
    if not cfg.invert:
        raise UsageError("localize needs --invert ID (repeatable)")
    w = {}
    for k in cfg.invert:
        if k not in c.gens:
            raise UsageError(f"unknown generator {k}")
        w[k] = frozenset((k,))
    objs = c.objects()
    x = _obj(c, cfg.x, objs[0])
    y = _obj(c, cfg.y, x)
    bids = _bids(cfg, _adams_span(c))
    r.info["hom"] = f"{x} -> {y}"
    if cfg.method in ("reduced", "both"):
        red = localized_hom(c, w, x, y, bids)
        r.table("localized (reduced)", red.betti)
        r.certificates["localized (reduced)"] = str(red.certificate)
    if cfg.method in ("raw", "both"):
        raw = localized_hom(c, w, x, y, bids, method="raw", cap=cfg.cap)
        r.table("localized (raw words)", raw.betti)
        r.certificates["localized (raw words)"] = str(raw.certificate)
    if cfg.method == "both":
        r.check("reduced and raw routes agree", red.betti == raw.betti)
    else:
        r.check("localized hom computed", True)


def cmd_bar(cfg, r):
    c = _category(cfg.inputs[0])
    b = bar(c, cfg.adams_cap)
    cc = b.complex()
    r.info["words"] = len(b.words)
    r.check("d o d = 0 on the bar complex", True)
    r.table(f"H B({c.name})", betti(cc, cc.bidegrees()))


def cmd_cobar(cfg, r):
    c = _cocategory(cfg.inputs[0])
    om = cobar(c, cfg.adams_cap)
    r.info["words"] = len(om.gens)
    r.check("Omega: A-infinity relations", *_verdict(check_relations(om, cfg.max_arity)))
    for x in om.objects():
        cc = value_complex(Yoneda(om, x), x)
        r.table(f"H Omega({c.name})({x}, {x})", betti(cc, cc.bidegrees()))


def cmd_koszul(cfg, r):
    c = _category(cfg.inputs[0])
    e = koszul_E(c, cfg.adams_cap)
    r.check("E: A-infinity relations", *_verdict(check_relations(e, cfg.max_arity)))
    ee = koszul_E(e, cfg.adams_cap)
    r.check("E(E): A-infinity relations", *_verdict(check_relations(ee, cfg.max_arity)))
    for x in c.objects():
        for name, cat in (("E", e), ("E(E)", ee)):
            cc = value_complex(Yoneda(cat, x), x)
            r.table(f"H {name}({c.name})({x}, {x})", betti(cc, cc.bidegrees()))


def _thm(rep, r):
    d = rep.as_dict()
    r.table("lhs H End(dot^0)", rep.lhs)
    r.table("rhs", rep.rhs)
    r.check("Betti tables agree", all(rep.verdicts.values()))
    for k, v in sorted(rep.checks.items()):
        r.check(k, v is True, "" if v is True else v)
    for k, v in sorted(rep.hypotheses.items()):
        r.info[f"hypothesis {k}"] = v
    for k, v in sorted(rep.stability.items()):
        r.check(k, v)
    r.certificates.update(d["certificates"])


def _adams_list(cfg, c):
    if cfg.window:
        return list(range(cfg.window[0], cfg.window[1] + 1))
    return None


def cmd_verify_thm_a(cfg, r):
    c = _category(cfg.inputs[0])
    enlarge = (lambda: _category(cfg.enlarge)) if cfg.enlarge else None
    degrees = range(cfg.degrees[0], cfg.degrees[1] + 1)
    _thm(verify_thm_A(c, label=cfg.label, degrees=degrees, adams=_adams_list(cfg, c), enlarge=enlarge), r)


def cmd_verify_thm_b(cfg, r):
    c = _category(cfg.inputs[0])
    if not cfg.f:
        raise UsageError("verify-thm-b needs --f MAP")
    try:
        name, table = load_map(Path(cfg.f).read_text(), split=True)
    except OSError as e:
        raise UsageError(f"cannot read {cfg.f}: {e.strerror}") from None
    except ParseError as e:
        raise UsageError(f"{cfg.f}: {e}") from None
    for k, v in table.items():
        for z in (k, *v):
            if not isinstance(z, Unit) and z not in c.gens:
                raise UsageError(f"{cfg.f}: unknown id {z}")
    r.inputs.append({"path": cfg.f, "sha256": _digest(cfg.f)})
    f = BimoduleMapF.from_table(c, shift_functor(c), table, name=name)
    enlarge = (lambda: _category(cfg.enlarge)) if cfg.enlarge else None
    degrees = range(cfg.degrees[0], cfg.degrees[1] + 1)
    _thm(verify_thm_B(c, f, m=cfg.m, label=cfg.label, degrees=degrees, adams=_adams_list(cfg, c),
                      enlarge=enlarge), r)


def cmd_verify_bar_cobar(cfg, r):
    c = _cocategory(cfg.inputs[0])
    rep = check_bar_cobar(c, cfg.adams_cap)
    r.table("H(C)", rep.betti_c)
    r.table("H B(Omega C)", rep.betti_bomega)
    r.check("Betti numbers of B(Omega C) and C agree", rep.betti_c == rep.betti_bomega)
    if rep.chain_map is not None:
        r.check("comparison C -> B(Omega C) is a chain map", *_verdict(rep.chain_map))
        r.check("comparison is a quasi-isomorphism", rep.quasi_iso)


HANDLERS = {
    "check-relations": cmd_check_relations, "check-functor": cmd_check_functor, "homology": cmd_homology,
    "grothendieck": cmd_grothendieck, "cylinder": cmd_cylinder, "mapping-torus": cmd_mapping_torus,
    "coinvariants": cmd_coinvariants, "localize": cmd_localize, "bar": cmd_bar, "cobar": cmd_cobar,
    "koszul": cmd_koszul, "verify-thm-a": cmd_verify_thm_a, "verify-thm-b": cmd_verify_thm_b,
    "verify-bar-cobar": cmd_verify_bar_cobar,
}

# errors that turn into a failing check rather than a usage error
CHECK_ERRORS = (NotADifferential, HypothesisFailed, NotStrict, IncompatibleSplitting, NotAdamsConnected, InfiniteSlice, CapTooSmall,
                NoCertificate, NoStabilization)


def _digest(path: str) -> str:
    try:
        return hashlib.sha256(Path(path).read_bytes()).hexdigest()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def run(cfg: RunConfig) -> Report:
    cfg.validate()
    r = Report(cfg.command, cfg.echo(), [{"path": p, "sha256": _digest(p)} for p in cfg.inputs])
    t = time.perf_counter()
    try:
        HANDLERS[cfg.command](cfg, r)
    except CHECK_ERRORS as e:
        r.check(f"{cfg.command}: {type(e).__name__}", False, str(e))
    if cfg.timing:
        r.wall_time = time.perf_counter() - t
    return r


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="artifact", description="Mapping tori of A-infinity categories over GF(2).")
    ap.add_argument("--version", action="version", version=f"artifact {__version__}")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("inputs", nargs="+", help="presentation file(s)")
    ap.add_argument("--config", help="JSON file with option values (flags override it)")
    ap.add_argument("--window", type=_range, help="Adams range A..B")
    ap.add_argument("--degrees", type=_range, help="cohomological range A..B (default -1..2)")
    ap.add_argument("--cap", type=int, help="word cap for the raw localization route")
    ap.add_argument("--adams-cap", type=int, help="Adams cap for bar/cobar/koszul (default 3)")
    ap.add_argument("--m", type=int, help="grading collapse parameter (default 0)")
    ap.add_argument("--f", help="map file for f (verify-thm-b)")
    ap.add_argument("--enlarge", help="the same input on a window two wider, for the stability re-run")
    ap.add_argument("--label", help="object label E (default X)")
    ap.add_argument("--x", help="source object, e.g. X[0]")
    ap.add_argument("--y", help="target object")
    ap.add_argument("--invert", action="append", help="generator id to invert (localize; repeatable)")
    ap.add_argument("--method", choices=("reduced", "raw", "both"))
    ap.add_argument("--functor", choices=("shift", "identity", "lift"))
    ap.add_argument("--max-arity", type=int)
    ap.add_argument("--output", "-o", help="write the report here instead of standard output")
    ap.add_argument("--format", choices=("human", "machine"))
    ap.add_argument("--timing", action="store_true", help="record wall time (breaks byte-identical reports)")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    base: dict = {}
    if ns.config:
        try:
            base = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read config {ns.config}: {e}") from None
        known = {f.name for f in dataclasses.fields(RunConfig)}
        bad = sorted(set(base) - known)
        if bad:
            raise UsageError(f"unknown config keys: {', '.join(bad)}")
        for k in ("window", "degrees"):
            if isinstance(base.get(k), str):
                base[k] = _range(base[k])
            elif base.get(k) is not None:
                base[k] = tuple(base[k])
    vals = dict(base)
    vals["command"] = ns.command
    vals["inputs"] = list(ns.inputs)
    for k in ("window", "degrees", "cap", "adams_cap", "m", "f", "enlarge", "label", "x", "y", "method",
              "functor", "max_arity", "output", "format"):
        v = getattr(ns, k)
        if v is not None:
            vals[k] = v
    if ns.invert is not None:
        vals["invert"] = list(ns.invert)
    if ns.timing:
        vals["timing"] = True
    return RunConfig(**vals)


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        r = run(cfg)
    except (UsageError, argparse.ArgumentTypeError) as e:
        print(f"artifact: error: {e}", file=sys.stderr)
        return 2
    text = render_report(r, cfg.format)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    bad = r.first_failure()
    if bad is not None:
        print(f"FAIL: {bad['name']}" + (f": {bad['detail']}" if bad["detail"] else ""), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
