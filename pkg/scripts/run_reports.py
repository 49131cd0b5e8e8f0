"""Write machine reports for every command over the corpus into a directory
(one JSON file per run) and print their sha256 digests."""
import argparse
import hashlib
from pathlib import Path

from ainftorus.cli import RunConfig, render_report, run

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

RUNS = [
    ("check-relations", ["line.ainf"], {}),
    ("check-relations", ["twolabel.ainf"], {}),
    ("check-relations", ["massey.ainf"], {}),
    ("check-functor", ["line.ainf"], {}),
    ("homology", ["twolabel.ainf"], {"x": "X[0]", "y": "Y[2]"}),
    ("grothendieck", ["units.ainf"], {}),
    ("cylinder", ["line.ainf"], {}),
    ("mapping-torus", ["units.ainf"], {}),
    ("coinvariants", ["twolabel.ainf"], {}),
    ("localize", ["line.ainf"], {"invert": ["e[0,1]", "e[1,2]"], "x": "X[0]", "y": "X[2]", "method": "both",
                                 "cap": 4}),
    ("bar", ["poly-t2.ainf"], {"adams_cap": 4}),
    ("cobar", ["cotwo.ainf"], {}),
    ("koszul", ["poly-t2.ainf"], {}),
    ("verify-thm-a", ["line.ainf"], {}),
    ("verify-thm-b", ["line.ainf"], {"f": "shift-f.map"}),
    ("verify-bar-cobar", ["cotwo.ainf"], {}),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i, (cmd, inputs, opts) in enumerate(RUNS):
        opts = dict(opts)
        if "f" in opts:
            opts["f"] = str(CORPUS / opts["f"])
        cfg = RunConfig(cmd, [str(CORPUS / p) for p in inputs], **opts)
        text = render_report(run(cfg), "machine")
        path = out / f"{i:02d}-{cmd}.json"
        path.write_text(text)
        print(f"{hashlib.sha256(text.encode()).hexdigest()}  {path.name}")


if __name__ == "__main__":
    main()
