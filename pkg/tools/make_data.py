"""Regenerate the example inputs shipped in src/mtk/data."""

import json
from pathlib import Path

from mtk import CYCLIC, TRIVIAL, DiGraph, GraphOfGroupsZ, QuotientPresentation, UndirectedGraph

OUT = Path(__file__).resolve().parent.parent / "src" / "mtk" / "data"


def dump(name, doc):
    (OUT / name).write_text(json.dumps(doc, indent=2) + "\n")


def main():
    OUT.mkdir(exist_ok=True)
    for n in range(2, 7):
        g = DiGraph.build(["v"], [(f"e{i}", "v", "v") for i in range(1, n + 1)])
        dump(f"rose{n}.json", QuotientPresentation(g, {"v": TRIVIAL}).to_json())
    for m, n in [(1, 2), (2, 3), (3, 2), (2, 2), (2, 4)]:
        g = DiGraph.build(["v"], [("e", "v", "v")])
        dump(f"bs{m}{n}.json", QuotientPresentation(g, {"v": CYCLIC}, {"e": (m, n)}).to_json())
    for n in (2, 3):
        g = UndirectedGraph.from_pairs(
            ["v"], [(f"a{i}", f"A{i}", "v", "v") for i in range(1, n + 1)])
        dump(f"free{n}.json", GraphOfGroupsZ(g, {"v": TRIVIAL}).to_json())
    g = UndirectedGraph.from_pairs(["v"], [("e", "E", "v", "v")])
    dump("bs23-gog.json", GraphOfGroupsZ(g, {"v": CYCLIC}, {"e": 2, "E": 3}).to_json())

    arrows = {"b0": ["a0", "a1"], "b1": ["a1", "a2"], "b2": ["a2", "a3"],
              "c0": ["b0", "b2"], "c1": ["b1"], "c2": ["b0", "b2"],
              "d0": ["c0"], "d1": ["c0"], "d2": ["c1"], "d3": ["c1"], "d4": ["c2"], "d5": ["c2"]}
    vertices = [f"a{i}" for i in range(4)] + [f"b{i}" for i in range(3)] \
        + [f"c{i}" for i in range(3)] + [f"d{i}" for i in range(6)]
    edges = [(f"{s}{r}", r, s) for s, rs in arrows.items() for r in rs]
    dump("multitree.json", DiGraph.build(vertices, edges).to_json())

    tree = UndirectedGraph.from_pairs(
        ["a", "b", "a1", "a2", "b1", "b2"],
        [("e", "E", "b", "a"), ("f1", "F1", "a1", "a"), ("f2", "F2", "a2", "a"),
         ("f3", "F3", "b1", "b"), ("f4", "F4", "b2", "b")])
    dump("dual-tree.json", tree.to_json())

    dump("family.json", {
        "universe": [1, 2, 3, 4, 5, 6],
        "members": {"p": [1, 2], "q": [2, 3], "r": [2], "p'": [4, 5], "q'": [5, 6], "r'": [5]},
        "action": [["p'", "q'", "r'", "p", "q", "r"]],
        "saturate": ["p", "q", "p'", "q'"],
    })
    bad = QuotientPresentation(DiGraph.build(["u", "v"], [("e", "v", "u")]),
                               {"u": TRIVIAL, "v": CYCLIC}, {"e": (2, 0)})
    dump("bad.json", bad.to_json())


if __name__ == "__main__":
    main()
