"""Strictly unital, Adams-bigraded A-infinity categories over GF(2).

A category exposes objects, finite hom bases, bidegrees and the operations
``mu(seq)`` where ``seq = (x0, ..., x_{d-1})`` is composable head to tail
(``x0`` leaves the first object).  Linear combinations are frozensets of
basis keys.  Units are never stored: ``Unit(X)`` is the basis key of the unit
of ``X`` and strict unitality is applied before any table lookup.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

__all__ = [
    "Atom", "Split", "Unit", "Comb", "ZERO", "add", "skey",
    "Category", "AinfCategory", "AinfCocategory", "Augmentation", "Verdict",
    "ParseError", "DegreeMismatch", "DanglingId", "NegativeAdamsDegree",
    "load_presentation", "dump_presentation", "load_map", "dump_map", "check_relations",
    "collapse_grading", "Collapsed", "poly_tensor", "PolyTensor",
    "shift_id", "composable_chains", "cached_hash",
]

Comb = frozenset
ZERO: frozenset = frozenset()
Bideg = tuple[int, int]


def add(a: frozenset, b: frozenset) -> frozenset:
    return a ^ b


def cached_hash(cls):
    """Memoize the dataclass hash of a frozen key class (nested keys are
    hashed very often)."""
    orig = cls.__hash__

    def __hash__(self):
        d = self.__dict__
        h = d.get("_h")
        if h is None:
            h = orig(self)
            object.__setattr__(self, "_h", h)
        return h

    orig_repr = cls.__repr__

    def __repr__(self):
        d = self.__dict__
        r = d.get("_r")
        if r is None:
            r = orig_repr(self)
            object.__setattr__(self, "_r", r)
        return r

    cls.__hash__ = __hash__
    cls.__repr__ = __repr__
    return cls


def skey(x) -> str:
    """Deterministic sort key for objects and basis keys."""
    return repr(x)


@cached_hash
@dataclass(frozen=True, order=True)
class Atom:
    name: str

    def __str__(self):
        return self.name


@cached_hash
@dataclass(frozen=True, order=True)
class Split:
    level: int
    label: str

    def __str__(self):
        return f"{self.label}[{self.level}]"

    def shifted(self, k: int = 1) -> "Split":
        return Split(self.level + k, self.label)


@cached_hash
@dataclass(frozen=True)
class Unit:
    obj: Hashable

    def __str__(self):
        return f"id({self.obj})"


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line, self.col = line, col


class DegreeMismatch(ValueError):
    pass


class DanglingId(ValueError):
    pass


class NegativeAdamsDegree(ValueError):
    pass


class Category:
    """Base class.  Subclasses implement ``_objects``, ``_hom``, ``_meta``
    (source, target, bidegree of a non-unit key) and ``_mu`` (on non-unit
    inputs).  ``arity_bound`` is the largest d with mu^d possibly nonzero."""

    name: str = "C"
    arity_bound: int = 2

    def __init__(self):
        self._mu_cache: dict = {}
        self._hom_cache: dict = {}
        self._out_cache: dict = {}
        self._meta_cache: dict = {}

    # --- structure -------------------------------------------------------
    def objects(self) -> tuple:
        raise NotImplementedError

    def _hom(self, x, y) -> tuple:
        raise NotImplementedError

    def _meta(self, k) -> tuple:
        raise NotImplementedError

    def _mu(self, seq: tuple) -> frozenset:
        raise NotImplementedError

    # --- derived ---------------------------------------------------------
    def hom(self, x, y) -> tuple:
        key = (x, y)
        got = self._hom_cache.get(key)
        if got is None:
            got = tuple(self._hom(x, y))
            if x == y:
                got = (Unit(x),) + got
            self._hom_cache[key] = got
        return got

    def out_basis(self, x) -> tuple:
        """Non-unit basis keys with source ``x``."""
        got = self._out_cache.get(x)
        if got is None:
            got = tuple(k for y in self.objects() for k in self.hom(x, y) if not isinstance(k, Unit))
            self._out_cache[x] = got
        return got

    def meta(self, k) -> tuple:
        got = self._meta_cache.get(k)
        if got is None:
            got = (k.obj, k.obj, (0, 0)) if isinstance(k, Unit) else tuple(self._meta(k))
            self._meta_cache[k] = got
        return got

    def source(self, k):
        return self.meta(k)[0]

    def target(self, k):
        return self.meta(k)[1]

    def bideg(self, k) -> Bideg:
        return self.meta(k)[2]

    def mu(self, seq: Sequence) -> frozenset:
        seq = tuple(seq)
        d = len(seq)
        units = [isinstance(k, Unit) for k in seq]
        if any(units):
            if d == 2:
                return frozenset((seq[1],)) if units[0] else frozenset((seq[0],))
            return ZERO
        if d > self.arity_bound:
            return ZERO
        got = self._mu_cache.get(seq)
        if got is None:
            got = self._mu(seq)
            self._mu_cache[seq] = got
        return got

    def mu_comb(self, combs: Sequence[Iterable]) -> frozenset:
        """Multilinear extension of mu to a sequence of combinations."""
        out = ZERO
        for seq in itertools.product(*[tuple(c) for c in combs]):
            out = out ^ self.mu(seq)
        return out

    def comb_bideg(self, c: Iterable) -> set:
        return {self.bideg(k) for k in c}

    def adams_graded_by_levels(self) -> bool:
        return all(isinstance(o, Split) for o in self.objects())


def composable_chains(c: Category, d: int, with_units: bool = False) -> Iterator[tuple]:
    """All composable d-tuples of basis keys, in a deterministic order."""
    objs = sorted(c.objects(), key=skey)

    def outs(x):
        ks = c.out_basis(x)
        return ((Unit(x),) + ks) if with_units else ks

    def rec(prefix, x):
        if len(prefix) == d:
            yield prefix
            return
        for k in outs(x):
            yield from rec(prefix + (k,), c.target(k))

    for x in objs:
        yield from rec((), x)


@dataclass
class Verdict:
    ok: bool
    checked: int = 0
    arity: int | None = None
    witness: tuple | None = None
    residual: tuple | None = None
    note: str = ""

    def __bool__(self):
        return self.ok

    def summary(self) -> str:
        if self.ok:
            return f"PASS ({self.checked} instances{'; ' + self.note if self.note else ''})"
        w = " ".join(str(k) for k in self.witness or ())
        r = " + ".join(sorted(str(k) for k in self.residual or ())) or "0"
        return f"FAIL at arity {self.arity}: ({w}) -> residual {r}"


def relation_residual(c: Category, seq: tuple) -> frozenset:
    """Sum over all (i, j) insertions of mu(..., mu(x_i..x_{j-1}), ...)."""
    d = len(seq)
    out = ZERO
    for i in range(d):
        for j in range(i + 1, d + 1):
            inner = c.mu(seq[i:j])
            for y in inner:
                out = out ^ c.mu(seq[:i] + (y,) + seq[j:])
    return out


def check_relations(c: Category, max_arity: int | None = None) -> Verdict:
    """Check the A-infinity relations on every composable tuple up to
    ``max_arity`` (default: arity bound + 2).  Arities above
    2 * arity_bound - 1 only contain vanishing terms and are skipped."""
    bound = c.arity_bound
    if max_arity is None:
        max_arity = bound + 2
    if max_arity < min(bound + 1, 2 * bound - 1):
        raise ValueError(f"max_arity {max_arity} below arity bound + 1")
    top = min(max_arity, 2 * bound - 1)
    n = 0
    for d in range(1, top + 1):
        for seq in composable_chains(c, d):
            n += 1
            r = relation_residual(c, seq)
            if r:
                return Verdict(False, n, d, seq, tuple(sorted(r, key=skey)))
    note = f"arities up to {max_arity}" + (f", above {top} vacuous" if top < max_arity else "")
    return Verdict(True, n, note=note)


# ---------------------------------------------------------------------------
# presented categories

_ID = r"[A-Za-z_][A-Za-z0-9_]*(?:\[-?\d+(?:,-?\d+)*\])?"
_OBJ = r"[A-Za-z_][A-Za-z0-9_]*(?:\[-?\d+\])?"
_id_re = re.compile(rf"^{_ID}$")
_obj_re = re.compile(rf"^{_OBJ}$")
_unit_re = re.compile(rf"^id\(({_OBJ})\)$")
_gen_re = re.compile(rf"^({_ID})\s*:\s*({_OBJ})\s*->\s*({_OBJ})\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)$")
_idx_re = re.compile(r"\[(-?\d+(?:,-?\d+)*)\]$")


def shift_id(k: str, by: int = 1) -> str:
    """Shift relabeling: add ``by`` to every bracketed integer index."""
    m = _idx_re.search(k)
    if not m:
        return k
    idx = ",".join(str(int(v) + by) for v in m.group(1).split(","))
    return k[: m.start()] + f"[{idx}]"


def parse_object(tok: str, split: bool):
    m = re.match(r"^([A-Za-z_][A-Za-z0-9_]*)\[(-?\d+)\]$", tok)
    if split:
        if not m:
            raise ValueError(f"object {tok!r} is not of the form Label[n]")
        return Split(int(m.group(2)), m.group(1))
    if m:
        raise ValueError(f"object {tok!r} uses a level index but no split header is present")
    return Atom(tok)


class AinfCategory(Category):
    """A finite presentation: objects, generators with bidegrees and a table
    of operations.  Optional Z-splitting (labels and a level window)."""

    def __init__(self, objects: Sequence, gens: Mapping[Hashable, tuple], table: Mapping[tuple, Iterable],
                 name: str = "C", labels: Sequence[str] | None = None, window: tuple[int, int] | None = None,
                 shift_equivariant: bool = False, validate: bool = True, cooperations=None):
        super().__init__()
        self.name = name
        self._objs = tuple(objects)
        self.gens = dict(gens)
        self.table = {tuple(k): frozenset(v) for k, v in table.items()}
        self.table = {k: v for k, v in self.table.items() if v}
        self.labels = tuple(labels) if labels else None
        self.window = tuple(window) if window else None
        self.shift_equivariant = shift_equivariant
        self.arity_bound = max((len(k) for k in self.table), default=2)
        self.arity_bound = max(self.arity_bound, 2)
        self._homs: dict = {}
        for k, (s, t, _) in self.gens.items():
            self._homs.setdefault((s, t), []).append(k)
        if validate:
            self.validate()

    def objects(self):
        return self._objs

    def _hom(self, x, y):
        return self._homs.get((x, y), ())

    def _meta(self, k):
        try:
            return self.gens[k]
        except KeyError:
            raise DanglingId(f"unknown morphism {k!r}") from None

    def _mu(self, seq):
        return self.table.get(seq, ZERO)

    @property
    def split(self) -> bool:
        return self.labels is not None

    def validate(self):
        objs = set(self._objs)
        kinds = {type(o) for o in objs}
        if len(kinds) > 1:
            raise ValueError("objects mix split and unsplit kinds")
        for k, (s, t, bd) in self.gens.items():
            if s not in objs or t not in objs:
                raise DanglingId(f"generator {k} has an undeclared endpoint")
            if isinstance(s, Split) and bd[1] != t.level - s.level:
                raise DegreeMismatch(f"generator {k}: Adams degree {bd[1]} != {t.level} - {s.level}")
        for ins, outs in self.table.items():
            for k in ins + tuple(outs):
                if not isinstance(k, Unit) and k not in self.gens:
                    raise DanglingId(f"mu entry {ins} mentions unknown id {k!r}")
                if isinstance(k, Unit) and k.obj not in objs:
                    raise DanglingId(f"mu entry {ins} mentions unknown unit {k}")
            for a, b in zip(ins, ins[1:]):
                if self.target(a) != self.source(b):
                    raise DegreeMismatch(f"mu entry {ins}: {a} and {b} are not composable")
            if any(isinstance(k, Unit) for k in ins):
                raise DegreeMismatch(f"mu entry {ins}: units are implicit and may not be inputs")
            d = len(ins)
            want = (sum(self.bideg(k)[0] for k in ins) + 2 - d, sum(self.bideg(k)[1] for k in ins))
            for o in outs:
                if self.source(o) != self.source(ins[0]) or self.target(o) != self.target(ins[-1]):
                    raise DegreeMismatch(f"mu entry {ins}: output {o} has the wrong endpoints")
                if self.bideg(o) != want:
                    raise DegreeMismatch(f"mu entry {' '.join(map(str, ins))}: output {o} has bidegree "
                                         f"{self.bideg(o)}, expected {want}")
        if self.shift_equivariant:
            bad = self.equivariance_defect()
            if bad is not None:
                raise ValueError(f"shift equivariance fails at mu entry {bad}")

    # shift relabeling -------------------------------------------------
    def shift_key(self, k, by: int = 1):
        if isinstance(k, Unit):
            return Unit(k.obj.shifted(by))
        return shift_id(k, by)

    def in_window(self, k) -> bool:
        if isinstance(k, Unit):
            return k.obj in set(self._objs)
        return k in self.gens

    def equivariance_defect(self):
        """First mu entry whose shift (staying inside the window) is absent
        or differs; None if equivariant."""
        for by in (1, -1):
            for ins, outs in self.table.items():
                sh = tuple(self.shift_key(k, by) for k in ins)
                if not all(self.in_window(k) for k in sh):
                    continue
                souts = frozenset(self.shift_key(k, by) for k in outs)
                if self.table.get(sh, ZERO) != souts:
                    return ins
        return None


@dataclass
class AinfCocategory:
    """Finite A-infinity cocategory: cooperations delta^d sending a generator
    to a combination of words (tuples of generators, head to tail)."""

    objects: tuple
    gens: dict
    coop: dict  # id -> frozenset of words
    name: str = "K"

    def bideg(self, k):
        return self.gens[k][2]

    def source(self, k):
        return self.gens[k][0]

    def target(self, k):
        return self.gens[k][1]

    def check(self) -> Verdict:
        """co-A-infinity relation: sum of (1 x delta x 1) o delta vanishes."""
        n = 0
        for g in self.gens:
            n += 1
            out = ZERO
            for word in self.coop.get(g, ZERO):
                for i, letter in enumerate(word):
                    for w2 in self.coop.get(letter, ZERO):
                        out = out ^ frozenset((word[:i] + w2 + word[i + 1:],))
            if out:
                return Verdict(False, n, None, (g,), tuple(sorted(out, key=skey)))
        return Verdict(True, n)


@dataclass
class Augmentation:
    """Degree-0 map to the semisimple base; ``values`` maps generator ids to
    0/1 (only degree-0 endomorphisms may be sent to 1).  Units go to 1."""

    values: dict = field(default_factory=dict)

    def __call__(self, k) -> int:
        if isinstance(k, Unit):
            return 1
        return self.values.get(k, 0)

    def check(self, c: Category) -> Verdict:
        n = 0
        for d in (1, 2):
            for seq in composable_chains(c, d):
                n += 1
                lhs = sum(self(k) for k in c.mu(seq)) % 2
                rhs = (self(seq[0]) * self(seq[1])) % 2 if d == 2 else 0
                if lhs != rhs:
                    return Verdict(False, n, d, seq)
        return Verdict(True, n)


# ---------------------------------------------------------------------------
# text format

SECTIONS = ("objects", "generators", "mu", "cooperations", "augmentation")


def _fmt_key(k) -> str:
    return str(k)


def load_presentation(text: str):
    """Parse a presentation document; returns AinfCategory, or
    AinfCocategory when a ``cooperations`` section is present."""
    name = "C"
    labels = window = None
    equivariant = False
    objects: list = []
    gens: dict = {}
    table: dict = {}
    coop: dict = {}
    aug: dict = {}
    section = None
    have_objects = False
    lines = text.splitlines()

    def obj(tok, ln, col):
        try:
            return parse_object(tok, labels is not None)
        except ValueError as e:
            raise ParseError(str(e), ln, col) from None

    def key(tok, ln, col):
        m = _unit_re.match(tok)
        if m:
            return Unit(obj(m.group(1), ln, col))
        if not _id_re.match(tok):
            raise ParseError(f"bad id {tok!r}", ln, col)
        return tok

    def comb(s, ln, col):
        s = s.strip()
        if s == "0":
            return ZERO
        out = ZERO
        for part in s.split("+"):
            part = part.strip()
            out = out ^ frozenset((key(part, ln, col),))
        return out

    for ln, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indented = line[0] in " \t"
        body = line.strip()
        col = len(line) - len(line.lstrip()) + 1
        if not indented:
            head, *rest = body.split(None, 1)
            if head == "category":
                name = rest[0].strip() if rest else "C"
                section = None
            elif head == "split":
                m = re.match(r"^split\s+(.+?)\s+window\s+(-?\d+)\.\.(-?\d+)(\s+equivariant)?$", body)
                if not m:
                    raise ParseError("expected: split LABEL... window A..B [equivariant]", ln, col)
                labels = m.group(1).split()
                window = (int(m.group(2)), int(m.group(3)))
                equivariant = bool(m.group(4))
                section = None
            elif head in SECTIONS:
                section = head
                if head == "objects":
                    have_objects = True
            else:
                raise ParseError(f"unknown section {head!r}", ln, col)
            continue
        if section is None:
            raise ParseError("indented line outside a section", ln, col)
        if section == "objects":
            for tok in body.split():
                objects.append(obj(tok, ln, col))
        elif section == "generators":
            m = _gen_re.match(body)
            if not m:
                raise ParseError("expected: ID : SRC -> TGT (p,k)", ln, col)
            gid = m.group(1)
            if gid in gens:
                raise ParseError(f"duplicate generator {gid}", ln, col)
            gens[gid] = (obj(m.group(2), ln, col), obj(m.group(3), ln, col), (int(m.group(4)), int(m.group(5))))
        elif section == "mu":
            if "->" not in body:
                raise ParseError("expected: IN1 IN2 ... -> OUT + OUT | 0", ln, col)
            lhs, rhs = body.split("->", 1)
            ins = tuple(key(t, ln, col) for t in lhs.split())
            if not ins:
                raise ParseError("empty input list", ln, col)
            if ins in table:
                raise ParseError(f"duplicate mu entry {lhs.strip()}", ln, col)
            table[ins] = comb(rhs, ln, col + len(lhs) + 2)
        elif section == "cooperations":
            lhs, rhs = body.split("->", 1)
            g = key(lhs.strip(), ln, col)
            words = ZERO
            if rhs.strip() != "0":
                for part in rhs.split("+"):
                    w = tuple(key(t.strip(), ln, col) for t in part.split("|"))
                    words = words ^ frozenset((w,))
            coop[g] = words
        elif section == "augmentation":
            lhs, rhs = body.split("->", 1)
            aug[key(lhs.strip(), ln, col)] = int(rhs.strip()) % 2

    if labels is not None and not have_objects:
        objects = [Split(n, e) for e in labels for n in range(window[0], window[1] + 1)]
    if labels is not None:
        for o in objects:
            if o.label not in labels or not (window[0] <= o.level <= window[1]):
                raise ParseError(f"object {o} outside the declared split", 0, 0)
    declared = set(objects)
    for g, (s, t, _) in gens.items():
        for o in (s, t):
            if o not in declared:
                raise DanglingId(f"generator {g} uses undeclared object {o}")
    if coop:
        for g, words in coop.items():
            for w in words:
                for k in w:
                    if k not in gens:
                        raise DanglingId(f"cooperation of {g} uses unknown id {k}")
        return AinfCocategory(tuple(objects), gens, {g: coop.get(g, ZERO) for g in gens}, name)
    cat = AinfCategory(objects, gens, table, name=name, labels=labels, window=window,
                       shift_equivariant=equivariant)
    cat.augmentation = Augmentation(aug) if aug else None
    return cat


def dump_presentation(c) -> str:
    out = [f"category {c.name}"]
    labels = getattr(c, "labels", None)
    if labels:
        eq = " equivariant" if getattr(c, "shift_equivariant", False) else ""
        out.append(f"split {' '.join(labels)} window {c.window[0]}..{c.window[1]}{eq}")
    objs = c.objects() if callable(c.objects) else c.objects
    out.append("objects")
    out.append("  " + " ".join(str(o) for o in objs))
    out.append("generators")
    for g, (s, t, (p, k)) in c.gens.items():
        out.append(f"  {g} : {s} -> {t} ({p},{k})")
    if isinstance(c, AinfCocategory):
        out.append("cooperations")
        for g in c.gens:
            words = sorted(c.coop.get(g, ZERO), key=lambda w: (len(w), [str(x) for x in w]))
            rhs = " + ".join("|".join(str(x) for x in w) for w in words) or "0"
            out.append(f"  {g} -> {rhs}")
        return "\n".join(out) + "\n"
    out.append("mu")
    for ins, outs in c.table.items():
        rhs = " + ".join(sorted(_fmt_key(k) for k in outs)) or "0"
        out.append(f"  {' '.join(_fmt_key(k) for k in ins)} -> {rhs}")
    aug = getattr(c, "augmentation", None)
    if aug is not None and aug.values:
        out.append("augmentation")
        for g, v in aug.values.items():
            out.append(f"  {g} -> {v}")
    return "\n".join(out) + "\n"


def load_map(text: str, split: bool = True) -> tuple[str, dict]:
    """Parse a map document: an optional ``map NAME`` header followed by
    indented ``KEY -> COMBINATION`` lines (keys as in presentations, units
    written id(X[n])).  Returns (name, table)."""
    name = "f"
    table: dict = {}

    def key(tok, ln, col):
        m = _unit_re.match(tok)
        if m:
            try:
                return Unit(parse_object(m.group(1), split))
            except ValueError as e:
                raise ParseError(str(e), ln, col) from None
        if not _id_re.match(tok):
            raise ParseError(f"bad id {tok!r}", ln, col)
        return tok

    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        body = line.strip()
        if line[0] not in " \t":
            head, *rest = body.split(None, 1)
            if head != "map":
                raise ParseError(f"unknown header {head!r}", ln, col)
            name = rest[0].strip() if rest else name
            continue
        if "->" not in body:
            raise ParseError("expected: KEY -> COMBINATION", ln, col)
        lhs, rhs = body.split("->", 1)
        k = key(lhs.strip(), ln, col)
        if k in table:
            raise ParseError(f"duplicate entry for {lhs.strip()}", ln, col)
        out = ZERO
        if rhs.strip() != "0":
            for part in rhs.split("+"):
                out = out ^ frozenset((key(part.strip(), ln, col),))
        table[k] = out
    return name, table


def dump_map(name: str, table: dict) -> str:
    out = [f"map {name}"]
    for k, v in table.items():
        rhs = " + ".join(sorted(str(z) for z in v)) or "0"
        out.append(f"  {k} -> {rhs}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# grading functors


class Collapsed(Category):
    """C_m: the bidegree (p, k) becomes the single degree p - m k (stored as
    (p - m k, 0)).  Objects, keys and operations are unchanged."""

    def __init__(self, base: Category, m: int):
        super().__init__()
        self.base, self.m = base, m
        self.name = f"{base.name}_{m}"
        self.arity_bound = base.arity_bound

    def objects(self):
        return self.base.objects()

    def _hom(self, x, y):
        return tuple(k for k in self.base.hom(x, y) if not isinstance(k, Unit))

    def _meta(self, k):
        s, t, (p, a) = self.base.meta(k)
        return s, t, (p - self.m * a, 0)

    def _mu(self, seq):
        return self.base.mu(seq)

    def original_bideg(self, k) -> Bideg:
        return self.base.bideg(k)


def collapse_grading(c: Category, m: int) -> Collapsed:
    return Collapsed(c, m)


class PolyTensor(Category):
    """F[t_m] (x) D truncated at Adams degree ``cap``.  Keys are
    ``('t', k, y)`` for k >= 1 and plain keys of D for k = 0."""

    def __init__(self, d: Category, m: int, cap: int):
        super().__init__()
        if cap is None or cap < 0:
            raise ValueError("an explicit non-negative Adams cap is required")
        for x in d.objects():
            for y in d.objects():
                for k in d.hom(x, y):
                    if d.bideg(k)[1] != 0:
                        raise ValueError("poly_tensor expects a singly graded input")
        self.d, self.m, self.cap = d, m, cap
        self.name = f"F[t_{m}]x{d.name}"
        self.arity_bound = d.arity_bound

    def objects(self):
        return self.d.objects()

    def _hom(self, x, y):
        base = self.d.hom(x, y)
        out = [k for k in base if not isinstance(k, Unit)]
        for j in range(1, self.cap + 1):
            out.extend(("t", j, k) for k in base)
        return out

    @staticmethod
    def split_key(k):
        if isinstance(k, tuple) and len(k) == 3 and k[0] == "t":
            return k[1], k[2]
        return 0, k

    def _meta(self, k):
        j, y = self.split_key(k)
        s, t = self.d.source(y), self.d.target(y)
        p = self.d.bideg(y)[0]
        return s, t, (p + self.m * j, j)

    def wrap(self, j: int, y):
        return y if j == 0 else ("t", j, y)

    def _mu(self, seq):
        parts = [self.split_key(k) for k in seq]
        total = sum(j for j, _ in parts)
        if total > self.cap:
            return ZERO
        inner = tuple(y for _, y in parts)
        return frozenset(self.wrap(total, z) for z in self.d.mu(inner))

    def mu(self, seq):
        seq = tuple(seq)
        parts = [self.split_key(k) for k in seq]
        if any(isinstance(y, Unit) for _, y in parts):
            total = sum(j for j, _ in parts)
            if total > self.cap:
                return ZERO
            inner = tuple(y for _, y in parts)
            return frozenset(self.wrap(total, z) for z in self.d.mu(inner))
        return super().mu(seq)


def poly_tensor(d: Category, m: int, adams_cap: int) -> PolyTensor:
    return PolyTensor(d, m, adams_cap)
