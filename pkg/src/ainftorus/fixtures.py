"""Small named categories used by tests, examples and the pipelines."""
from __future__ import annotations

from .core import AinfCategory, AinfCocategory, Atom, Augmentation, Split

__all__ = ["directed_line", "units_line", "two_label", "poly_t", "point", "massey_square",
           "two_gen_cocategory", "FIXTURES"]


def directed_line(lo: int = -2, hi: int = 4, label: str = "X", deg: int = 0) -> AinfCategory:
    """Objects X[n]; one morphism e[i,j] : X[i] -> X[j] for i < j of
    bidegree (deg * (j - i), j - i); composition e[i,j] e[j,k] = e[i,k]."""
    objs = [Split(n, label) for n in range(lo, hi + 1)]
    gens = {}
    for i in range(lo, hi + 1):
        for j in range(i + 1, hi + 1):
            gens[f"e[{i},{j}]"] = (Split(i, label), Split(j, label), (deg * (j - i), j - i))
    table = {}
    for i in range(lo, hi + 1):
        for j in range(i + 1, hi + 1):
            for k in range(j + 1, hi + 1):
                table[(f"e[{i},{j}]", f"e[{j},{k}]")] = {f"e[{i},{k}]"}
    return AinfCategory(objs, gens, table, name="line", labels=[label], window=(lo, hi), shift_equivariant=True)


def units_line(lo: int = -2, hi: int = 4) -> AinfCategory:
    """Split objects with only identity morphisms."""
    return AinfCategory([Split(n, "X") for n in range(lo, hi + 1)], {}, {}, name="units", labels=["X"],
                        window=(lo, hi), shift_equivariant=True)


def two_label(lo: int = -2, hi: int = 4) -> AinfCategory:
    """Two directed lines X, Y with cross morphisms g[i,j] : X[i] -> Y[j]
    (i <= j) of bidegree (1, j - i), absorbing compositions on both sides."""
    objs = [Split(n, lab) for lab in ("X", "Y") for n in range(lo, hi + 1)]
    gens = {}
    table = {}
    for lab, p in (("X", "e"), ("Y", "f")):
        for i in range(lo, hi + 1):
            for j in range(i + 1, hi + 1):
                gens[f"{p}[{i},{j}]"] = (Split(i, lab), Split(j, lab), (0, j - i))
    for i in range(lo, hi + 1):
        for j in range(i, hi + 1):
            gens[f"g[{i},{j}]"] = (Split(i, "X"), Split(j, "Y"), (1, j - i))
    for p in ("e", "f"):
        for i in range(lo, hi + 1):
            for j in range(i + 1, hi + 1):
                for k in range(j + 1, hi + 1):
                    table[(f"{p}[{i},{j}]", f"{p}[{j},{k}]")] = {f"{p}[{i},{k}]"}
    for i in range(lo, hi + 1):
        for j in range(i + 1, hi + 1):
            for k in range(j, hi + 1):
                table[(f"e[{i},{j}]", f"g[{j},{k}]")] = {f"g[{i},{k}]"}
        for j in range(i, hi + 1):
            for k in range(j + 1, hi + 1):
                table[(f"g[{i},{j}]", f"f[{j},{k}]")] = {f"g[{i},{k}]"}
    return AinfCategory(objs, gens, table, name="twolabel", labels=["X", "Y"], window=(lo, hi),
                        shift_equivariant=True)


def poly_t(cap: int = 4, deg: int = 2, adams: int = 1) -> AinfCategory:
    """One object; t^k for 1 <= k <= cap with t^a t^b = t^(a+b) (zero above
    the cap).  Augmented by sending every t^k to 0."""
    o = Atom("pt")
    gens = {f"t{k}": (o, o, (deg * k, adams * k)) for k in range(1, cap + 1)}
    table = {(f"t{a}", f"t{b}"): {f"t{a + b}"} for a in range(1, cap + 1) for b in range(1, cap + 1 - a)}
    c = AinfCategory([o], gens, table, name="F[t]")
    c.augmentation = Augmentation({})
    return c


def point() -> AinfCategory:
    c = AinfCategory([Atom("pt")], {}, {}, name="point")
    c.augmentation = Augmentation({})
    return c


def massey_square() -> AinfCategory:
    """A < B < C < D with a, b, c composing to zero and mu^3(a, b, c) = z."""
    A, B, C, D = (Atom(s) for s in "ABCD")
    gens = {"a": (A, B, (1, 1)), "b": (B, C, (1, 1)), "c": (C, D, (1, 1)), "z": (A, D, (2, 3))}
    return AinfCategory([A, B, C, D], gens, {("a", "b", "c"): {"z"}}, name="massey")


def two_gen_cocategory() -> AinfCocategory:
    """x, y of bidegree (1, 1) and z of bidegree (2, 2) with
    delta^2(z) = x | y (delta^d has degree 2 - d)."""
    o = Atom("pt")
    gens = {"x": (o, o, (1, 1)), "y": (o, o, (1, 1)), "z": (o, o, (2, 2))}
    return AinfCocategory((o,), gens, {"x": frozenset(), "y": frozenset(), "z": frozenset({("x", "y")})},
                          name="cotwo")


FIXTURES = {
    "units-line": units_line,
    "directed-line": directed_line,
    "two-label": two_label,
    "poly-t2": poly_t,
    "point": point,
    "massey": massey_square,
    "cotwo": two_gen_cocategory,
}
