"""Quotients by cones of morphisms and localized hom complexes.

Cones are adjoined as one-step twisted complexes: Cone(w : X -> Y) is
X[1] (+) Y with twisting w.  Killing a set of cones K_1, ... replaces a hom
complex C(x, y) by the word complex

    sum over p >= 0 of  C(x, K_1)[1] (x) C(K_1, K_2)[1] (x) ... (x) C(K_p, y)

with differential the sum of the mu^k over consecutive subsequences (the
last letter merging with the module value through the module action).
Every letter except the last is shifted down by one.

Two ways to get homology out of the (infinite) word complex:

* raw: all words with at most ``cap`` shifted letters.  That is a
  subcomplex; capped results are compared across consecutive caps.
* reduced: each letter complex is contracted onto its homology and the
  merge terms are transferred with the perturbation lemma.  The reduced
  complex lives on words of homology letters and is finite in each
  bidegree whenever a linear functional on bidegrees is non-negative on all
  homology letters with no cycles of zero weight; then the answer is exact.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .core import ZERO, Category, Unit, cached_hash, skey
from .f2linalg import ChainComplex, betti, bits
from .modules import (ConeModule, Module, ModuleMap, SumModule, Yoneda, _xor_into, is_quasi_iso_at,
                      value_complex)

__all__ = [
    "ConeObj", "TwKey", "TwVal", "TwCategory", "TwModule", "adjoin_cone", "NotClosedDegreeZero",
    "CapTooSmall", "NoStabilization", "HypothesisFailed", "NoCertificate", "Exact", "Stabilized",
    "Contraction", "WordEngine", "QuotientModule", "quotient_module", "quotient_hom_complex",
    "localized_hom", "LocalizedHom", "LocalizationPresentation", "telescope_module",
    "telescope_oracle", "TelescopeReport", "cone_acyclic", "cone_of", "Truncated", "NoWords",
]


class NotClosedDegreeZero(ValueError):
    pass


class CapTooSmall(ValueError):
    pass


class NoStabilization(RuntimeError):
    pass


class HypothesisFailed(ValueError):
    pass


class NoCertificate(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# twisted complexes with one cone step


@cached_hash
@dataclass(frozen=True)
class ConeObj:
    name: str
    src: Hashable
    tgt: Hashable
    w: frozenset
    adams: int = 0

    def __str__(self):
        return f"Cone({self.name})"

    def summands(self):
        return ((self.src, (1, -self.adams)), (self.tgt, (0, 0)))


@cached_hash
@dataclass(frozen=True)
class TwKey:
    src: Hashable
    tgt: Hashable
    i: int
    j: int
    k: Hashable

    def __str__(self):
        return f"{self.k}<{self.i}{self.j}>"


@cached_hash
@dataclass(frozen=True)
class TwVal:
    obj: Hashable
    i: int
    u: Hashable

    def __str__(self):
        return f"{self.u}<{self.i}>"


def _summands(o):
    return o.summands() if isinstance(o, ConeObj) else ((o, (0, 0)),)


def _delta_paths(o, j, i):
    """Twisting insertions taking summand j to summand i of object o:
    None when impossible, otherwise a list of combinations to insert."""
    if j == i:
        return []
    if isinstance(o, ConeObj) and j == 0 and i == 1:
        return [o.w]
    return None


class TwCategory(Category):
    """The base category enlarged by cone objects.  Homs between plain
    objects are the base homs with the base keys; homs touching a cone are
    component-wise with ``TwKey`` keys."""

    def __init__(self, base: Category, cones: Iterable[ConeObj] = ()):
        super().__init__()
        self.base = base
        self.cones = tuple(cones)
        self.name = f"Tw({base.name})"
        self.arity_bound = base.arity_bound

    def objects(self):
        return tuple(self.base.objects()) + self.cones

    def hom(self, p, q):
        if not isinstance(p, ConeObj) and not isinstance(q, ConeObj):
            return self.base.hom(p, q)
        key = (p, q)
        got = self._hom_cache.get(key)
        if got is None:
            got = tuple(TwKey(p, q, i, j, k)
                        for i, (a, _) in enumerate(_summands(p))
                        for j, (b, _) in enumerate(_summands(q))
                        for k in self.base.hom(a, b))
            self._hom_cache[key] = got
        return got

    def _meta(self, k):
        if isinstance(k, TwKey):
            sp = _summands(k.src)[k.i][1]
            sq = _summands(k.tgt)[k.j][1]
            p, a = self.base.bideg(k.k)
            return k.src, k.tgt, (p + sp[0] - sq[0], a + sp[1] - sq[1])
        return self.base.meta(k)

    @staticmethod
    def comp(k, cat):
        if isinstance(k, TwKey):
            return k.src, k.tgt, k.i, k.j, k.k
        return cat.source(k), cat.target(k), 0, 0, k

    def wrap(self, p, q, s, e, z):
        if not isinstance(p, ConeObj) and not isinstance(q, ConeObj):
            return z
        return TwKey(p, q, s, e, z)

    def _mu(self, seq):
        if not any(isinstance(k, TwKey) for k in seq):
            return self.base.mu(seq)
        comps = [self.comp(k, self.base) for k in seq]
        middle: list = []
        for t, c in enumerate(comps):
            if t:
                ins = _delta_paths(c[0], comps[t - 1][3], c[2])
                if ins is None:
                    return ZERO
                middle.extend(ins)
            middle.append(frozenset((c[4],)))
        p, q = comps[0][0], comps[-1][1]
        out: dict = {}
        for s in range(len(_summands(p))):
            lead = _delta_paths(p, s, comps[0][2])
            if lead is None:
                continue
            for e in range(len(_summands(q))):
                trail = _delta_paths(q, comps[-1][3], e)
                if trail is None:
                    continue
                full = lead + middle + trail
                if len(full) > self.base.arity_bound:
                    continue
                for z in self.base.mu_comb(full):
                    _xor_into(out, (self.wrap(p, q, s, e, z),))
        return frozenset(out)


def adjoin_cone(c: Category, w: Iterable, name: str | None = None, tw: TwCategory | None = None) -> ConeObj:
    """Cone object of a closed degree-0 combination w (all keys sharing
    source, target and bidegree (0, a)).  Raises NotClosedDegreeZero."""
    w = frozenset(w)
    if not w:
        raise NotClosedDegreeZero("the zero combination has no endpoints; pass source and target explicitly")
    return cone_of(c, w, name)


def cone_of(c: Category, w: frozenset, name: str | None = None, src=None, tgt=None) -> ConeObj:
    w = frozenset(w)
    if w:
        ends = {(c.source(k), c.target(k)) for k in w}
        bds = {c.bideg(k) for k in w}
        if len(ends) != 1 or len(bds) != 1:
            raise NotClosedDegreeZero("w mixes endpoints or bidegrees")
        (src, tgt), = ends
        (bd,) = bds
        if bd[0] != 0:
            raise NotClosedDegreeZero(f"w has cohomological degree {bd[0]}")
        if c.mu_comb([w]):
            raise NotClosedDegreeZero("w is not closed")
        adams = bd[1]
    else:
        adams = 0
    return ConeObj(name or " + ".join(sorted(map(str, w))) or f"0:{src}->{tgt}", src, tgt, w, adams)


class TwModule(Module):
    """Extension of a module over the base to cone objects."""

    def __init__(self, m: Module, tw: TwCategory):
        super().__init__(tw, f"Tw({m.name})")
        self.m, self.tw = m, tw
        self.arity_bound = m.arity_bound

    def _values(self, p):
        if not isinstance(p, ConeObj):
            return self.m.values(p)
        return tuple(TwVal(p, i, u) for i, (a, _) in enumerate(_summands(p)) for u in self.m.values(a))

    def vbideg(self, u):
        if isinstance(u, TwVal):
            p, a = self.m.vbideg(u.u)
            sh = _summands(u.obj)[u.i][1]
            return p + sh[0], a + sh[1]
        return self.m.vbideg(u)

    def vobj(self, u):
        return u.obj if isinstance(u, TwVal) else self.m.vobj(u)

    def _act(self, seq, u):
        if not isinstance(u, TwVal) and not any(isinstance(k, TwKey) for k in seq):
            return self.m.act(seq, u)
        comps = [TwCategory.comp(k, self.tw.base) for k in seq]
        uobj, ui, uu = (u.obj, u.i, u.u) if isinstance(u, TwVal) else (self.m.vobj(u), 0, u)
        middle: list = []
        for t, c in enumerate(comps):
            if t:
                ins = _delta_paths(c[0], comps[t - 1][3], c[2])
                if ins is None:
                    return ZERO
                middle.extend(ins)
            middle.append(frozenset((c[4],)))
        if comps:
            ins = _delta_paths(uobj, comps[-1][3], ui)
            if ins is None:
                return ZERO
            middle.extend(ins)
        p = comps[0][0] if comps else uobj
        first_i = comps[0][2] if comps else ui
        out: dict = {}
        for s in range(len(_summands(p))):
            lead = _delta_paths(p, s, first_i)
            if lead is None:
                continue
            full = lead + middle
            if len(full) > self.m.arity_bound:
                continue
            for z in self.m.act_comb(full, (uu,)):
                _xor_into(out, (TwVal(p, s, z) if isinstance(p, ConeObj) else z,))
        return frozenset(out)


def cone_acyclic(m: Module, cone: ConeObj, tw: TwCategory | None = None, adams: Iterable[int] | None = None) -> bool:
    """M(Cone w) has vanishing homology (in the given Adams degrees)."""
    tw = tw or TwCategory(m.cat, [cone])
    ext = TwModule(m, tw)
    cc = value_complex(ext, cone, adams)
    return all(v == 0 for v in betti(cc, cc.bidegrees()).values())


# ---------------------------------------------------------------------------
# contractions of finite complexes onto their homology


class Contraction:
    """Strong deformation retraction of a finite bigraded complex onto its
    homology: iota, pi, h with pi iota = 1, iota pi = 1 + dh + hd and the
    side conditions h iota = 0, pi h = 0, h h = 0.

    Homology classes are indexed ``(bideg, t)``.
    """

    def __init__(self, elements: dict, dfun):
        self.bideg = dict(elements)
        slices: dict = {}
        for k in sorted(elements, key=lambda k: (elements[k], skey(k))):
            slices.setdefault(elements[k], []).append(k)
        self.slices = slices
        idx = {b: {k: i for i, k in enumerate(sl)} for b, sl in slices.items()}
        # columns of d per slice, and pivot columns
        dcols: dict = {}
        pivots_of: dict = {}
        kernels: dict = {}
        for b, sl in slices.items():
            tb = (b[0] + 1, b[1])
            tidx = idx.get(tb, {})
            cols = []
            for k in sl:
                v = 0
                for t in dfun(k):
                    v ^= 1 << tidx[t]
                cols.append(v)
            dcols[b] = cols
            piv: dict = {}
            chosen = []
            kern = []
            for j, col in enumerate(cols):
                v, comb = col, 1 << j
                while v:
                    low = (v & -v).bit_length() - 1
                    hit = piv.get(low)
                    if hit is None:
                        break
                    v ^= hit[0]
                    comb ^= hit[1]
                if v:
                    piv[(v & -v).bit_length() - 1] = (v, comb)
                    chosen.append(j)
                else:
                    kern.append(comb)
            pivots_of[b] = chosen
            kernels[b] = kern
        self._coords: dict = {}
        self._h: dict = {}
        self._pi: dict = {}
        self.classes: dict = {}
        self._iota: dict = {}
        for b, sl in slices.items():
            pb = (b[0] - 1, b[1])
            bvecs = [dcols[pb][j] for j in pivots_of.get(pb, [])]
            bsrc = [slices[pb][j] for j in pivots_of.get(pb, [])]
            # extend boundaries to cycles
            red: dict = {}

            def reduce(v):
                while v:
                    low = (v & -v).bit_length() - 1
                    hit = red.get(low)
                    if hit is None:
                        return v
                    v ^= hit
                return 0

            for v in bvecs:
                r = reduce(v)
                red[(r & -r).bit_length() - 1] = r
            zvecs = []
            for v in kernels[b]:
                r = reduce(v)
                if r:
                    red[(r & -r).bit_length() - 1] = r
                    zvecs.append(v)
            cvecs = [1 << j for j in pivots_of[b]]
            cols = bvecs + zvecs + cvecs
            if len(cols) != len(sl):
                raise AssertionError("contraction basis has the wrong size")
            nb, nz = len(bvecs), len(zvecs)
            piv2: dict = {}
            for j, col in enumerate(cols):
                v, comb = col, 1 << j
                while v:
                    low = (v & -v).bit_length() - 1
                    hit = piv2.get(low)
                    if hit is None:
                        break
                    v ^= hit[0]
                    comb ^= hit[1]
                piv2[(v & -v).bit_length() - 1] = (v, comb)
            for i, k in enumerate(sl):
                v, comb = 1 << i, 0
                while v:
                    low = (v & -v).bit_length() - 1
                    hv, hc = piv2[low]
                    v ^= hv
                    comb ^= hc
                coords = bits(comb)
                self._pi[k] = frozenset((b, c - nb) for c in coords if nb <= c < nb + nz)
                self._h[k] = frozenset(bsrc[c] for c in coords if c < nb)
            for t, z in enumerate(zvecs):
                self.classes[(b, t)] = b
                self._iota[(b, t)] = frozenset(sl[i] for i in bits(z))

    def pi(self, k) -> frozenset:
        return self._pi[k]

    def h(self, k) -> frozenset:
        return self._h[k]

    def iota(self, c) -> frozenset:
        return self._iota[c]

    def iota_pi(self, k) -> frozenset:
        acc: dict = {}
        for c in self._pi[k]:
            _xor_into(acc, self._iota[c])
        return frozenset(acc)

    def check(self, dfun) -> bool:
        """Verify the contraction identities on every basis element."""
        for k in self.bideg:
            lhs: dict = {}
            _xor_into(lhs, (k,))
            _xor_into(lhs, self.iota_pi(k))
            for a in self.h(k):
                _xor_into(lhs, dfun(a))
            for a in dfun(k):
                _xor_into(lhs, self.h(a))
            if lhs:
                return False
            for a in self.h(k):
                if self.h(a) or self.pi(a):
                    return False
        for c, z in self._iota.items():
            acc: dict = {}
            for a in z:
                _xor_into(acc, self.pi(a))
            if set(acc) != {c}:
                return False
            for a in z:
                for t in dfun(a):
                    pass
            for a in z:
                if self.h(a):
                    # h iota = 0 requires the cycle to be free of boundary coordinates
                    hz: dict = {}
                    for a2 in z:
                        _xor_into(hz, self.h(a2))
                    if hz:
                        return False
                    break
        return True


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Exact:
    functional: tuple[int, int]

    def __str__(self):
        return f"exact (weight {self.functional[0]}*deg + {self.functional[1]}*adams)"


@dataclass(frozen=True)
class Stabilized:
    cap: int

    def __str__(self):
        return f"stabilized at cap {self.cap}"


@dataclass(frozen=True)
class NoWords:
    """No word starts at x at any length: the quotient value is zero."""

    def __str__(self):
        return "no words (zero at every cap)"


@dataclass(frozen=True)
class Truncated:
    cap: int

    def __str__(self):
        return f"truncated at cap {self.cap}"


FUNCTIONALS = ((0, 1), (-1, 0), (-1, 1), (-1, 2), (1, 1), (1, 2), (0, -1), (1, 0), (-1, -1), (1, -1))


# ---------------------------------------------------------------------------
# the word complex


class WordEngine:
    """Words computing the quotient of a module M over a twisted category T
    by a set of cone objects.  A word is a tuple of keys ``(a_0, ...,
    a_{p-1}, m)`` with a_0 : x -> K_1, a_t : K_t -> K_{t+1} and m in
    M(K_p); for p = 0 it is ``(m,)`` with m in M(x)."""

    def __init__(self, tw: TwCategory, m: Module, killed: Sequence[ConeObj]):
        self.tw, self.m = tw, m
        self.killed = tuple(killed)
        self._contr: dict = {}
        self._delta_cache: dict = {}
        self._hl_cache: dict = {}
        self._info_cache: dict = {}
        self._ids: dict = {}
        self._keys: list = []
        self._hids: dict = {}
        self._hls: list = []
        self._hbd: list = []
        self._dcache: dict = {}

    # bidegrees ---------------------------------------------------------
    def letter_bideg(self, k):
        p, a = self.tw.bideg(k)
        return p - 1, a

    def word_bideg(self, w):
        p = sum(self.tw.bideg(k)[0] for k in w[:-1]) - (len(w) - 1)
        a = sum(self.tw.bideg(k)[1] for k in w[:-1])
        vp, va = self.m.vbideg(w[-1])
        return p + vp, a + va

    # chain-level differential ------------------------------------------
    def d1(self, w) -> frozenset:
        """Letterwise mu^1."""
        acc: dict = {}
        for t in range(len(w) - 1):
            for z in self.tw.mu((w[t],)):
                _xor_into(acc, (w[:t] + (z,) + w[t + 1:],))
        for v in self.m.act((), w[-1]):
            _xor_into(acc, (w[:-1] + (v,),))
        return frozenset(acc)

    def delta(self, w) -> frozenset:
        """Merge terms (length lowering)."""
        got = self._delta_cache.get(w)
        if got is not None:
            return got
        acc: dict = {}
        p = len(w) - 1
        letters, m = w[:-1], w[-1]
        for i in range(p):
            for j in range(i + 2, min(p, i + self.tw.arity_bound) + 1):
                for z in self.tw.mu(letters[i:j]):
                    _xor_into(acc, (letters[:i] + (z,) + letters[j:] + (m,),))
        for i in range(max(0, p - self.m.arity_bound), p):
            for v in self.m.act(letters[i:], m):
                _xor_into(acc, (letters[:i] + (v,),))
        got = frozenset(acc)
        self._delta_cache[w] = got
        return got

    def d(self, w) -> frozenset:
        return self.d1(w) ^ self.delta(w)

    # raw enumeration -----------------------------------------------------
    def has_words(self, x) -> bool:
        """Whether any word starts at x: some object reachable from x through
        letters (x itself or a killed object) carries module values."""
        seen, todo = {x}, [x]
        while todo:
            o = todo.pop()
            if self.m.values(o):
                return True
            for k in self.killed:
                if k not in seen and self.tw.hom(o, k):
                    seen.add(k)
                    todo.append(k)
        return False

    def raw_words(self, x, cap: int, keep=None) -> dict:
        """All words with at most ``cap`` shifted letters (optionally only
        those whose bidegree satisfies ``keep``)."""
        out = {}

        def rec(prefix, obj, bd):
            for u in self.m.values(obj):
                vb = self.m.vbideg(u)
                b = (bd[0] + vb[0], bd[1] + vb[1])
                if keep is None or keep(b):
                    out[prefix + (u,)] = b
            if len(prefix) >= cap:
                return
            for k in self.killed:
                for a in self.tw.hom(obj, k):
                    lb = self.letter_bideg(a)
                    rec(prefix + (a,), k, (bd[0] + lb[0], bd[1] + lb[1]))

        rec((), x, (0, 0))
        return out

    def raw_complex(self, x, cap: int, bidegrees: Iterable) -> tuple[ChainComplex, bool]:
        """Capped subcomplex on the requested bidegrees and their neighbours.
        Second value: whether words of length cap + 1 exist there."""
        want = set()
        for b in bidegrees:
            want.update({(b[0] - 1, b[1]), tuple(b), (b[0] + 1, b[1])})
        words = self.raw_words(x, cap + 1, keep=lambda b: b in want)
        longer = any(len(w) - 1 == cap + 1 for w in words)
        words = {w: b for w, b in words.items() if len(w) - 1 <= cap}

        def dfun(w):
            tb = (words[w][0] + 1, words[w][1])
            if tb not in want:
                return ()
            return self.d(w)

        return ChainComplex.from_differential(words, dfun), longer

    # reduced complex -------------------------------------------------------
    # Chain keys and homology letters are interned as integers inside the
    # reduced route so that words are tuples of ints.

    def _kid(self, k) -> int:
        i = self._ids.get(k)
        if i is None:
            i = self._ids[k] = len(self._keys)
            self._keys.append(k)
        return i

    def _hid(self, hl) -> int:
        i = self._hids.get(hl)
        if i is None:
            i = self._hids[hl] = len(self._hls)
            self._hls.append(hl)
            self._hbd.append(self.hl_bideg(hl))
        return i

    def space_of_letter(self, k, first: bool = False):
        p, q = self.tw.source(k), self.tw.target(k)
        if p == q and not first:
            return ("N", p)
        return ("L", p, q)

    def identity(self, p) -> tuple:
        """(pivot key, rest) with id_p = pivot + sum(rest)."""
        if isinstance(p, ConeObj):
            keys = [TwKey(p, p, i, i, Unit(a)) for i, (a, _) in enumerate(_summands(p))]
            return keys[-1], tuple(keys[:-1])
        return Unit(p), ()

    def _nbar(self, p, comb) -> frozenset:
        piv, rest = self.identity(p)
        acc: dict = {}
        for k in comb:
            _xor_into(acc, rest if k == piv else (k,))
        return frozenset(acc)

    def contraction(self, space) -> Contraction:
        got = self._contr.get(space)
        if got is None:
            if space[0] == "L":
                _, p, q = space
                elems = {k: self.tw.bideg(k) for k in self.tw.hom(p, q)}
                got = Contraction(elems, lambda k: self.tw.mu((k,)))
            elif space[0] == "N":
                p = space[1]
                piv, _ = self.identity(p)
                elems = {k: self.tw.bideg(k) for k in self.tw.hom(p, p) if k != piv}
                got = Contraction(elems, lambda k: self._nbar(p, self.tw.mu((k,))))
            else:
                q = space[1]
                elems = {u: self.m.vbideg(u) for u in self.m.values(q)}
                got = Contraction(elems, lambda u: self.m.act((), u))
            self._contr[space] = got
        return got

    def _info(self, i: int, pos: int) -> tuple:
        """Per-letter data for the key with id i: (pi as homology letter ids,
        h, iota pi, normal form) with key ids.  pos is 0 for the first
        letter, 1 for a middle letter and 2 for the module value.  The normal
        form is None unless the key is the pivot of an identity (then it is
        the replacing tuple)."""
        key = (i, pos)
        got = self._info_cache.get(key)
        if got is None:
            k = self._keys[i]
            sp = ("V", self.m.vobj(k)) if pos == 2 else self.space_of_letter(k, pos == 0)
            norm = None
            if sp[0] == "N":
                piv, rest = self.identity(sp[1])
                if k == piv:
                    norm = tuple(self._kid(r) for r in rest)
            if norm is None:
                c = self.contraction(sp)
                got = (tuple(self._hid((sp, cl)) for cl in c.pi(k)),
                       tuple(self._kid(z) for z in c.h(k)),
                       tuple(self._kid(z) for z in c.iota_pi(k)), None)
            else:
                got = ((), (), (), norm)
            self._info_cache[key] = got
        return got

    def _infos(self, w) -> list:
        n = len(w) - 1
        info = self._info
        return [info(k, 2 if t == n else (0 if t == 0 else 1)) for t, k in enumerate(w)]

    def _delta_ids(self, w) -> tuple:
        got = self._dcache.get(w)
        if got is None:
            keys = self._keys
            got = tuple(tuple(self._kid(k) for k in v) for v in self.delta(tuple(keys[i] for i in w)))
            self._dcache[w] = got
        return got

    def normalize(self, w) -> dict:
        """Image of a chain-level word in the normalized complex: middle
        letters that are endomorphisms of a killed object are read modulo the
        identity (pivot -> rest)."""
        opts = None
        for t, info in enumerate(self._infos(w)):
            if info[3] is not None:
                if not info[3]:
                    return {}
                opts = opts or [(k,) for k in w]
                opts[t] = info[3]
        if opts is None:
            return {w: None}
        acc: dict = {}
        for combo in itertools.product(*opts):
            _xor_into(acc, (combo,))
        return acc

    def _iota_word(self, hw) -> dict:
        factors = []
        for h in hw:
            sp, cl = self._hls[h]
            factors.append(tuple(self._kid(z) for z in self.contraction(sp).iota(cl)))
        acc: dict = {}
        for combo in itertools.product(*factors):
            _xor_into(acc, (combo,))
        return acc

    def _pi_word(self, w) -> dict:
        factors = []
        for info in self._infos(w):
            if not info[0]:
                return {}
            factors.append(info[0])
        acc: dict = {}
        for combo in itertools.product(*factors):
            _xor_into(acc, (combo,))
        return acc

    def _h_word(self, w) -> dict:
        """h on the tensor product: h(v0 (x) rest) = h(v0) (x) iota pi(rest)
        + v0 (x) h(rest)."""
        infos = self._infos(w)
        acc: dict = {}
        n = len(w)
        for t in range(n):
            ht = infos[t][1]
            if not ht:
                continue
            tails = [infos[r][2] for r in range(t + 1, n)]
            if not all(tails):
                continue
            for mid in ht:
                for tail in itertools.product(*tails):
                    _xor_into(acc, (w[:t] + (mid,) + tail,))
        return acc

    def reduced_d(self, hw) -> dict:
        """pi delta (sum over k of (h delta)^k) iota on a homology word."""
        total: dict = {}
        cur = self._iota_word(hw)
        while cur:
            dd: dict = {}
            for w in cur:
                for v in self._delta_ids(w):
                    _xor_into(dd, self.normalize(v))
            nxt: dict = {}
            for w in dd:
                _xor_into(total, self._pi_word(w))
                _xor_into(nxt, self._h_word(w))
            cur = nxt
        return total

    # homology-letter graph ------------------------------------------------
    def h_letters(self, p, q, first: bool = False) -> list:
        """Homology letters from p to q as (id, bidegree)."""
        key = (p, q, first)
        got = self._hl_cache.get(key)
        if got is None:
            sp = ("N", p) if p == q and not first else ("L", p, q)
            ids = [self._hid((sp, cl)) for cl in self.contraction(sp).classes]
            got = self._hl_cache[key] = [(i, self._hbd[i]) for i in ids]
        return got

    def h_values(self, q) -> list:
        key = ("V", q)
        got = self._hl_cache.get(key)
        if got is None:
            ids = [self._hid((key, cl)) for cl in self.contraction(key).classes]
            got = self._hl_cache[key] = [(i, self._hbd[i]) for i in ids]
        return got

    @staticmethod
    def hl_bideg(hl):
        (kind, *_), (b, _) = hl
        return (b[0] - 1, b[1]) if kind in ("L", "N") else b

    def describe(self, hw) -> str:
        return " | ".join(str(self._hls[h][1]) for h in hw)

    def certificate(self):
        """A functional phi with phi >= 0 on all homology letters between
        killed cones and no zero-weight cycle; None if none of the
        candidates works."""
        edges = {}
        for p in self.killed:
            for q in self.killed:
                hl = self.h_letters(p, q)
                if hl:
                    edges[(p, q)] = [b for _, b in hl]
        for phi in FUNCTIONALS:
            val = lambda b: phi[0] * b[0] + phi[1] * b[1]
            if any(val(b) < 0 for bs in edges.values() for b in bs):
                continue
            zero = {}
            for (p, q), bs in edges.items():
                if any(val(b) == 0 for b in bs):
                    zero.setdefault(p, set()).add(q)
            if _has_cycle(zero):
                continue
            return phi
        return None

    def reduced_words(self, x, bidegrees: Iterable, phi) -> dict:
        """All homology words (tuples of letter ids) whose bidegree lies in
        the given set; phi is a certificate functional.  Besides phi, every
        candidate functional that is non-negative on all homology letters
        prunes the search, using the least weight needed from a cone to end
        the word."""
        want = set(tuple(b) for b in bidegrees)
        letters = {(p, q): [b for _, b in self.h_letters(p, q)] for p in self.killed for q in self.killed}
        funcs = [phi] + [f for f in FUNCTIONALS if f != phi and all(
            f[0] * b[0] + f[1] * b[1] >= 0 for bs in letters.values() for b in bs)]
        prune = []
        for f in funcs:
            val = lambda b, f=f: f[0] * b[0] + f[1] * b[1]
            dist = {}
            for q in self.killed:
                vs = [val(b) for _, b in self.h_values(q)]
                if vs:
                    dist[q] = min(vs)
            # weights are non-negative, so |killed| relaxation rounds suffice
            for _ in range(len(self.killed)):
                changed = False
                for (p, q), bs in letters.items():
                    if q in dist and bs:
                        c = min(val(b) for b in bs) + dist[q]
                        if p not in dist or c < dist[p]:
                            dist[p] = c
                            changed = True
                if not changed:
                    break
            prune.append((f, dist, max(val(b) for b in want)))
        out = {}
        for h, b in self.h_values(x):
            if b in want:
                out[(h,)] = b

        def alive(q, bd):
            for f, dist, top in prune:
                dq = dist.get(q)
                if dq is None or f[0] * bd[0] + f[1] * bd[1] + dq > top:
                    return False
            return True

        outgoing = {q: [(r, hl) for r in self.killed for hl in self.h_letters(q, r)] for q in self.killed}

        def rec(prefix, obj, bd):
            for h, hb in self.h_values(obj):
                b = (bd[0] + hb[0], bd[1] + hb[1])
                if b in want:
                    out[prefix + (h,)] = b
            for q, (h, hb) in outgoing[obj]:
                nb = (bd[0] + hb[0], bd[1] + hb[1])
                if alive(q, nb):
                    rec(prefix + (h,), q, nb)

        for q in self.killed:
            for h, hb in self.h_letters(x, q, first=True):
                if alive(q, hb):
                    rec((h,), q, hb)
        return out

    def reduced_complex(self, x, bidegrees: Iterable, phi=None) -> tuple[ChainComplex, object]:
        if phi is None:
            phi = self.certificate()
            if phi is None:
                raise NoCertificate("no weight functional bounds the homology words")
        want = set()
        for b in bidegrees:
            want.update({(b[0] - 1, b[1]), tuple(b), (b[0] + 1, b[1])})
        words = self.reduced_words(x, want, phi)

        def dfun(hw):
            tb = (words[hw][0] + 1, words[hw][1])
            if tb not in want:
                return ()
            return tuple(self.reduced_d(hw))

        return ChainComplex.from_differential(words, dfun), Exact(phi)


def _has_cycle(graph: dict) -> bool:
    state: dict = {}

    def visit(v):
        state[v] = 1
        for u in graph.get(v, ()):
            s = state.get(u)
            if s == 1:
                return True
            if s is None and visit(u):
                return True
        state[v] = 2
        return False

    return any(state.get(v) is None and visit(v) for v in list(graph))


# ---------------------------------------------------------------------------
# public entry points


@dataclass
class LocalizedHom:
    betti: dict
    certificate: object
    sizes: dict = field(default_factory=dict)

    def as_dict(self):
        return {"betti": {f"{p},{a}": v for (p, a), v in sorted(self.betti.items())},
                "certificate": str(self.certificate)}


class QuotientModule:
    """M / A for a module over T and a list of killed cone objects."""

    def __init__(self, m: Module, killed: Sequence[ConeObj], tw: TwCategory | None = None):
        if tw is None:
            tw = m.cat if isinstance(m.cat, TwCategory) else TwCategory(
                m.cat, [k for k in killed if isinstance(k, ConeObj)])
        self.tw = tw
        self.m = m if m.cat is tw else TwModule(m, tw)
        self.engine = WordEngine(tw, self.m, killed)

    def value_complex(self, x, bidegrees, method: str = "reduced", cap: int | None = None):
        if method == "raw":
            if cap is None:
                raise CapTooSmall("raw words need an explicit cap")
            cc, _ = self.engine.raw_complex(x, cap, bidegrees)
            return cc, Truncated(cap)
        return self.engine.reduced_complex(x, bidegrees)

    def betti(self, x, bidegrees, method: str = "reduced", cap: int | None = None,
              max_cap: int = 8) -> LocalizedHom:
        bidegrees = sorted(set(tuple(b) for b in bidegrees))
        if method == "reduced":
            cc, cert = self.engine.reduced_complex(x, bidegrees)
            return LocalizedHom(betti(cc, bidegrees), cert, {b: len(cc.basis(b)) for b in bidegrees})
        if method != "raw":
            raise ValueError(f"unknown method {method!r}")
        if cap is not None:
            cc, _ = self.engine.raw_complex(x, cap, bidegrees)
            cert = Truncated(cap)
            return LocalizedHom(betti(cc, bidegrees), cert, {b: len(cc.basis(b)) for b in bidegrees})
        if not self.engine.has_words(x):
            zero = {b: 0 for b in bidegrees}
            return LocalizedHom(zero, NoWords(), dict(zero))
        # equal tables only count once some word lands in the requested
        # bidegrees; before that the cap is merely too short to reach y
        history = []
        for c in range(1, max_cap + 1):
            cc, _ = self.engine.raw_complex(x, c, bidegrees)
            if not history and not any(cc.basis(b) for b in bidegrees):
                continue
            bt = betti(cc, bidegrees)
            history.append(bt)
            if len(history) >= 3 and history[-1] == history[-2] == history[-3]:
                return LocalizedHom(bt, Stabilized(c), {b: len(cc.basis(b)) for b in bidegrees})
        raise NoStabilization(f"raw word homology did not stabilize up to cap {max_cap}")


def quotient_module(m: Module, killed: Sequence[ConeObj], tw: TwCategory | None = None) -> QuotientModule:
    return QuotientModule(m, killed, tw)


def quotient_hom_complex(c: Category, killed: Sequence[ConeObj], x, y, bidegrees, cap: int,
                         strict: bool = False) -> ChainComplex:
    """Capped word complex of hom_{C/A}(x, y).  With ``strict`` a word of
    length cap + 1 in the requested range raises CapTooSmall."""
    if cap < 0:
        raise CapTooSmall("cap must be non-negative")
    tw = c if isinstance(c, TwCategory) else TwCategory(c, [k for k in killed if isinstance(k, ConeObj)])
    eng = WordEngine(tw, Yoneda(tw, y), killed)
    cc, longer = eng.raw_complex(x, cap, bidegrees)
    if strict and longer:
        raise CapTooSmall(f"words with {cap + 1} letters exist in the requested bidegrees")
    return cc


@dataclass
class LocalizationPresentation:
    """A category with a named set of morphisms to invert."""

    cat: Category
    morphisms: dict  # name -> combination

    def __post_init__(self):
        self.cones = {}
        for name, w in self.morphisms.items():
            w = frozenset(w) if not isinstance(w, (str,)) else frozenset((w,))
            cone = cone_of(self.cat, w, name)
            if any(self.cat.bideg(k)[1] < 0 for k in w):
                raise NotClosedDegreeZero(f"{name} has negative Adams degree")
            self.cones[name] = cone
        self.tw = TwCategory(self.cat, self.cones.values())

    def killed(self):
        return list(self.cones.values())

    def hom(self, x, y, bidegrees, method: str = "reduced", cap=None) -> LocalizedHom:
        q = QuotientModule(Yoneda(self.tw, y), self.killed(), self.tw)
        return q.betti(x, bidegrees, method=method, cap=cap)


def localized_hom(c: Category, w: dict | Sequence, x, y, bidegrees, method: str = "reduced",
                  cap: int | None = None) -> LocalizedHom:
    if not isinstance(w, dict):
        w = {f"w{i}": v for i, v in enumerate(w)}
    return LocalizationPresentation(c, w).hom(x, y, bidegrees, method, cap)


# ---------------------------------------------------------------------------
# the telescope module and its oracle


def telescope_module(c: Category, cs: dict, lo: int, hi: int, label_obj) -> ConeModule:
    """M_A = Cone(sum_n A(-, X^n) -> sum_n A(-, X^n)) via id + t_{c_n}.
    ``cs[n]`` is c_n : X^n -> X^{n+1}; top row n in [lo, hi - 1], bottom row
    n in [lo, hi].  ``label_obj(n)`` gives X^n.  Adams degrees of c_n are
    ignored, so the input should be singly graded."""
    top = SumModule([(n, Yoneda(c, label_obj(n))) for n in range(lo, hi)], name="top")
    bot = SumModule([(n, Yoneda(c, label_obj(n))) for n in range(lo, hi + 1)], name="bottom")

    def comp(seq, u):
        n, v = u
        acc: dict = {}
        if not seq:
            _xor_into(acc, ((n, v),))
        for z in c.mu_comb([frozenset((k,)) for k in seq] + [frozenset((v,)), cs[n]]):
            _xor_into(acc, ((n + 1, z),))
        return acc

    t = ModuleMap(top, bot, comp, 0, max(c.arity_bound - 2, 0), "id+t_c")
    return ConeModule(t, name="M_A")


@dataclass
class TelescopeReport:
    hypotheses: dict
    betti: dict
    checks: dict = field(default_factory=dict)


def telescope_oracle(c: Category, cs: dict, lo: int, hi: int, label_obj, x, strict: bool = True) -> TelescopeReport:
    """Betti numbers of M_A(x) together with the hypothesis that
    mu^2(-, c_j) : A(X^i, X^j) -> A(X^i, X^{j+1}) is a quasi-isomorphism for
    i < j in the window.  Raises HypothesisFailed when ``strict``."""
    hyp = {}
    for j in range(lo, hi):
        t = _right_mult(c, cs[j], label_obj(j), label_obj(j + 1))
        for i in range(lo, j):
            hyp[(i, j)] = is_quasi_iso_at(t, label_obj(i))
    bad = [k for k, v in hyp.items() if not v]
    if bad and strict:
        raise HypothesisFailed(f"right multiplication by c_{bad[0][1]} is not a quasi-isomorphism on "
                               f"A(X^{bad[0][0]}, X^{bad[0][1]})")
    m = telescope_module(c, cs, lo, hi, label_obj)
    cc = value_complex(m, x)
    return TelescopeReport(hyp, betti(cc, cc.bidegrees()))


def _right_mult(c: Category, w: frozenset, y0, y1) -> ModuleMap:
    src, tgt = Yoneda(c, y0), Yoneda(c, y1)

    def comp(seq, u):
        return c.mu_comb([frozenset((k,)) for k in seq] + [frozenset((u,)), w])

    return ModuleMap(src, tgt, comp, 0, max(c.arity_bound - 2, 0), "t_c")
