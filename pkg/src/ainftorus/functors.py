"""A-infinity functors and homotopies between them."""
from __future__ import annotations

import itertools
from typing import Callable, Iterator, Mapping, Sequence

from .core import ZERO, Category, NegativeAdamsDegree, PolyTensor, Unit, Verdict, composable_chains, skey

__all__ = [
    "AinfFunctor", "FunctorHomotopy", "ObjectMismatch", "check_functor", "compose_functors",
    "identity_functor", "strict_functor", "compositions", "block_splits", "check_homotopy", "adjunction_lift",
]


class ObjectMismatch(ValueError):
    pass


def compositions(d: int) -> Iterator[tuple[int, ...]]:
    """Ordered compositions of d into positive parts."""
    for cuts in itertools.product((0, 1), repeat=d - 1):
        parts, run = [], 1
        for c in cuts:
            if c:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        yield tuple(parts)


def block_splits(seq: tuple) -> Iterator[list[tuple]]:
    for parts in compositions(len(seq)):
        out, i = [], 0
        for p in parts:
            out.append(seq[i:i + p])
            i += p
        yield out


class AinfFunctor:
    """Components F^d given by ``comp(seq) -> frozenset`` on non-unit inputs.

    Units are handled here: F^1(e_X) = e_{F X} and any higher component with
    a unit input vanishes (strictly unital functors).
    """

    def __init__(self, source: Category, target: Category, obj_map: Callable | Mapping,
                 comp: Callable[[tuple], frozenset], strict: bool = False, arity_bound: int | None = None,
                 name: str = "F"):
        self.source, self.target = source, target
        self._obj = obj_map if callable(obj_map) else obj_map.__getitem__
        self._comp = comp
        self.strict = strict
        self.arity_bound = 1 if strict else (arity_bound or 2)
        self.name = name
        self._cache: dict = {}

    def obj(self, x):
        return self._obj(x)

    def __call__(self, seq: Sequence) -> frozenset:
        seq = tuple(seq)
        d = len(seq)
        if any(isinstance(k, Unit) for k in seq):
            if d == 1:
                return frozenset((Unit(self.obj(seq[0].obj)),))
            return ZERO
        if d > self.arity_bound:
            return ZERO
        got = self._cache.get(seq)
        if got is None:
            got = frozenset(self._comp(seq))
            self._cache[seq] = got
        return got

    def apply_comb(self, combs: Sequence) -> frozenset:
        out = ZERO
        for seq in itertools.product(*[tuple(c) for c in combs]):
            out = out ^ self(seq)
        return out

    def blocks_image(self, seq: tuple) -> Iterator[tuple[list[tuple], list[frozenset]]]:
        """For each block decomposition, the list of F-images of the blocks
        (skipping decompositions with a vanishing block)."""
        for blocks in block_splits(seq):
            if any(len(b) > self.arity_bound for b in blocks):
                continue
            imgs = [self(b) for b in blocks]
            if all(imgs):
                yield blocks, imgs


def identity_functor(c: Category) -> AinfFunctor:
    return AinfFunctor(c, c, lambda x: x, lambda s: frozenset(s), strict=True, name="id")


def strict_functor(source: Category, target: Category, obj_map, mor_map: Callable, name: str = "F") -> AinfFunctor:
    """Strict functor from a map on basis keys (key -> combination)."""
    def comp(seq):
        if len(seq) != 1:
            return ZERO
        return frozenset(mor_map(seq[0]))
    return AinfFunctor(source, target, obj_map, comp, strict=True, name=name)


def functor_residual(F: AinfFunctor, seq: tuple) -> frozenset:
    src, tgt = F.source, F.target
    d = len(seq)
    out = ZERO
    for i in range(d):
        for j in range(i + 1, d + 1):
            for y in src.mu(seq[i:j]):
                out = out ^ F(seq[:i] + (y,) + seq[j:])
    for blocks, imgs in F.blocks_image(seq):
        if len(imgs) > tgt.arity_bound:
            continue
        out = out ^ tgt.mu_comb(imgs)
    return out


def check_functor(F: AinfFunctor, max_arity: int | None = None, chains=None) -> Verdict:
    """F(mu-insertions) = mu(F-blocks) on every composable tuple."""
    if max_arity is None:
        max_arity = max(F.source.arity_bound, F.target.arity_bound) + F.arity_bound
    n = 0
    for d in range(1, max_arity + 1):
        for seq in (chains(d) if chains else composable_chains(F.source, d)):
            n += 1
            r = functor_residual(F, seq)
            if r:
                return Verdict(False, n, d, seq, tuple(sorted(r, key=skey)))
    return Verdict(True, n, note=f"arities up to {max_arity}")


def compose_functors(F: AinfFunctor, G: AinfFunctor) -> AinfFunctor:
    """G o F (F applied first)."""
    if F.target is not G.source:
        raise ObjectMismatch("target of the first functor is not the source of the second")

    def comp(seq):
        out = ZERO
        for blocks, imgs in F.blocks_image(seq):
            if len(imgs) > G.arity_bound:
                continue
            out = out ^ G.apply_comb(imgs)
        return out

    strict = F.strict and G.strict
    bound = F.arity_bound * G.arity_bound
    return AinfFunctor(F.source, G.target, lambda x: G.obj(F.obj(x)), comp, strict=strict,
                       arity_bound=bound, name=f"{G.name}o{F.name}")


class FunctorHomotopy:
    """Components T^d (degree -d) between functors Phi and Psi with equal
    object maps; T^d with a unit input vanishes."""

    def __init__(self, phi: AinfFunctor, psi: AinfFunctor, comp: Callable[[tuple], frozenset],
                 arity_bound: int = 1):
        self.phi, self.psi = phi, psi
        self._comp = comp
        self.arity_bound = arity_bound

    def __call__(self, seq) -> frozenset:
        seq = tuple(seq)
        if any(isinstance(k, Unit) for k in seq) or len(seq) > self.arity_bound:
            return ZERO
        return frozenset(self._comp(seq))


def homotopy_residual(h: FunctorHomotopy, seq: tuple) -> frozenset:
    phi, psi = h.phi, h.psi
    src, tgt = phi.source, phi.target
    d = len(seq)
    out = phi(seq) ^ psi(seq)
    for i in range(d):
        for j in range(i + 1, d + 1):
            for y in src.mu(seq[i:j]):
                out = out ^ h(seq[:i] + (y,) + seq[j:])
    # mu(Phi blocks..., T block, Psi blocks...)
    for blocks in block_splits(seq):
        r = len(blocks)
        if r > tgt.arity_bound:
            continue
        for t in range(r):
            imgs = [phi(b) for b in blocks[:t]] + [h(blocks[t])] + [psi(b) for b in blocks[t + 1:]]
            if all(imgs):
                out = out ^ tgt.mu_comb(imgs)
    return out


def check_homotopy(h: FunctorHomotopy, max_arity: int = 3) -> Verdict:
    if any(h.phi.obj(x) != h.psi.obj(x) for x in h.phi.source.objects()):
        return Verdict(False, 0, note="object maps differ")
    n = 0
    for d in range(1, max_arity + 1):
        for seq in composable_chains(h.phi.source, d):
            n += 1
            r = homotopy_residual(h, seq)
            if r:
                return Verdict(False, n, d, seq, tuple(sorted(r, key=skey)))
    return Verdict(True, n)


def adjunction_lift(psi_m: AinfFunctor, c: Category, m: int, adams_cap: int) -> AinfFunctor:
    """Lift of psi_m : C_m -> D to C -> F[t_m] (x) D, sending a tuple of
    Adams degrees k_0..k_{d-1} to t^(k_0 + ... + k_{d-1}) (x) psi_m(tuple)."""
    for x in c.objects():
        for y in c.objects():
            for k in c.hom(x, y):
                if c.bideg(k)[1] < 0:
                    raise NegativeAdamsDegree(f"{k} has Adams degree {c.bideg(k)[1]}")
    target = PolyTensor(psi_m.target, m, adams_cap)

    def comp(seq):
        total = sum(c.bideg(k)[1] for k in seq)
        if total > adams_cap:
            return ZERO
        return frozenset(target.wrap(total, z) for z in psi_m(seq))

    return AinfFunctor(c, target, psi_m.obj, comp, strict=psi_m.strict, arity_bound=psi_m.arity_bound,
                       name=f"lift({psi_m.name})")
