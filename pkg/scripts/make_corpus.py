"""Write the in-repo fixture corpus (presentations and the shift map f)."""
import argparse
from pathlib import Path

from ainftorus.core import Split, Unit, dump_map, dump_presentation
from ainftorus.fixtures import FIXTURES, directed_line, units_line

FILES = {
    "units-line": "units.ainf",
    "directed-line": "line.ainf",
    "two-label": "twolabel.ainf",
    "poly-t2": "poly-t2.ainf",
    "point": "point.ainf",
    "massey": "massey.ainf",
    "cotwo": "cotwo.ainf",
}


def shift_f(lo: int, hi: int) -> dict:
    """f(e[i,j]) = e[i,j+1] and f(id(X[i])) = e[i,i+1] on the shift domain."""
    table = {}
    for i in range(lo, hi):
        table[Unit(Split(i, "X"))] = {f"e[{i},{i + 1}]"}
        for j in range(i + 1, hi):
            table[f"e[{i},{j}]"] = {f"e[{i},{j + 1}]"}
    return table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "corpus"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for key, fname in FILES.items():
        (out / fname).write_text(dump_presentation(FIXTURES[key]()))
    (out / "line-wide.ainf").write_text(dump_presentation(directed_line(-4, 6)))
    (out / "units-wide.ainf").write_text(dump_presentation(units_line(-4, 6)))
    (out / "shift-f.map").write_text(dump_map("f", shift_f(-2, 4)))
    print(f"wrote corpus to {out}")


if __name__ == "__main__":
    main()
