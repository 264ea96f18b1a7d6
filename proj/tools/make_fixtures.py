#!/usr/bin/env python3
"""Regenerates the toy graphs and plans under data/ and tests/fixtures/."""
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
BAD = ROOT / "tests" / "fixtures" / "bad"

# One voter per cell; A and B each hold 18 of the 36 cells.
PATTERN_6X6 = ["AABABB", "ABBABA", "BAABAB", "AABBBA", "BABAAB", "ABABBA"]
PATTERN_3X3 = ["AAB", "BAB", "ABB"]


def grid(rows, cols, pattern=None, election="TOY"):
    verts, edges = [], []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            vert = {"id": str(v + 1), "pop": 1}
            if pattern:
                a = 1 if pattern[r][c] == "A" else 0
                vert["votes"] = {election: {"A": a, "B": 1 - a}}
            verts.append(vert)
            if c + 1 < cols:
                edges.append([str(v + 1), str(v + 2)])
            if r + 1 < rows:
                edges.append([str(v + 1), str(v + cols + 1)])
    return {"vertices": verts, "edges": edges}


def write_json(path, doc):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=1) + "\n")


def write_plan(path, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("unit_id,district\n" + "".join(f"{u},{d}\n" for u, d in rows))


def main():
    write_json(DATA / "grid6x6.json", grid(6, 6, PATTERN_6X6))
    write_json(DATA / "grid3x3.json", grid(3, 3, PATTERN_3X3))
    write_json(DATA / "grid2x3.json", grid(2, 3))
    write_plan(DATA / "rows3x3.csv", [(i + 1, i // 3 + 1) for i in range(9)])
    write_plan(DATA / "rows2x3.csv", [(i + 1, i // 3 + 1) for i in range(6)])
    # Three districts of two full rows each (12 cells).
    write_plan(DATA / "bands6x6.csv", [(i + 1, i // 12 + 1) for i in range(36)])

    ok = {"vertices": [{"id": "a", "pop": 1}, {"id": "b", "pop": 1}], "edges": [["a", "b"]]}
    write_json(BAD / "minimal.json", ok)
    write_json(BAD / "unknown_vertex.json",
               {"vertices": ok["vertices"], "edges": [["a", "b"], ["b", "zz"]]})
    write_json(BAD / "disconnected.json",
               {"vertices": ok["vertices"] + [{"id": "c", "pop": 1}, {"id": "d", "pop": 1},
                                              {"id": "e", "pop": 1}],
                "edges": [["a", "b"], ["c", "d"], ["d", "e"]]})
    write_json(BAD / "duplicate_vertex.json",
               {"vertices": ok["vertices"] + [{"id": "a", "pop": 2}], "edges": [["a", "b"]]})
    write_json(BAD / "duplicate_edge.json",
               {"vertices": ok["vertices"], "edges": [["a", "b"], ["b", "a"]]})
    write_json(BAD / "self_loop.json",
               {"vertices": ok["vertices"], "edges": [["a", "b"], ["a", "a"]]})
    write_json(BAD / "negative_pop.json",
               {"vertices": [{"id": "a", "pop": -1}, {"id": "b", "pop": 1}], "edges": [["a", "b"]]})
    write_json(BAD / "missing_pop.json",
               {"vertices": [{"id": "a"}, {"id": "b", "pop": 1}], "edges": [["a", "b"]]})
    write_json(BAD / "incomplete_election.json",
               {"vertices": [{"id": "a", "pop": 1, "votes": {"E": {"A": 1, "B": 0}}},
                             {"id": "b", "pop": 1}],
                "edges": [["a", "b"]]})
    (BAD / "malformed.json").write_text('{"vertices": [')
    write_plan(BAD / "plan_missing_vertex.csv", [("a", 1)])
    write_plan(BAD / "plan_unknown_vertex.csv", [("a", 1), ("b", 2), ("q", 1)])
    write_plan(BAD / "plan_gap.csv", [("a", 1), ("b", 3)])
    (BAD / "plan_bad_label.csv").write_text("unit_id,district\na,1\nb,x\n")


if __name__ == "__main__":
    main()
