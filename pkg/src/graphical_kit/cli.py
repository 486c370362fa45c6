"""Command-line entry point: ``graphical-kit <command> ...``.

Every command prints a report (JSON by default, ``--format text`` for a
summary) and exits 0 exactly when the report records no failures.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import __version__
from .gmap import GraphicalMap, check_graphical_map
from .graph import enumerate_graphs
from .words import (RELATION_KINDS, ElementaryWord, WordError, compose_word, decompose,
                    normalize, relation_instances, verify_relation)

DEFAULT_BUDGET = (3, 5)
MAX_COUNTEREXAMPLES = 5


def default_budget() -> tuple:
    raw = os.environ.get("GRAPHICAL_KIT_BUDGET")
    if not raw:
        return DEFAULT_BUDGET
    try:
        v, e = (int(x) for x in raw.replace("x", ",").split(","))
    except ValueError:
        raise SystemExit(f"GRAPHICAL_KIT_BUDGET must look like '3,5', got {raw!r}")
    return (v, e)


@dataclass
class Report:
    command: str
    config: dict
    results: Dict[str, Dict[str, int]] = field(default_factory=dict)
    counterexamples: List[dict] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    started: float = field(default_factory=time.time)
    wall_time: float = 0.0

    def record(self, check: str, status: str, payload: Optional[dict] = None):
        row = self.results.setdefault(check, {"checked": 0, "passed": 0, "failed": 0,
                                              "inapplicable": 0})
        if status == "inapplicable":
            row["inapplicable"] += 1
            return
        row["checked"] += 1
        row["passed" if status == "pass" else "failed"] += 1
        if status != "pass" and payload is not None and len(self.counterexamples) < MAX_COUNTEREXAMPLES:
            self.counterexamples.append(dict(payload, check=check))

    @property
    def failures(self) -> int:
        return sum(r["failed"] for r in self.results.values())

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def finish(self) -> "Report":
        self.wall_time = round(time.time() - self.started, 3)
        return self

    def to_json(self) -> dict:
        return {"command": self.command, "config": self.config, "ok": self.ok,
                "results": self.results, "counterexamples": self.counterexamples,
                "notes": self.notes, "wall_time": self.wall_time}

    def to_text(self) -> str:
        lines = [f"{self.command}: {'PASS' if self.ok else 'FAIL'} ({self.wall_time:.1f}s)",
                 "config: " + ", ".join(f"{k}={v}" for k, v in self.config.items())]
        for name, r in sorted(self.results.items()):
            lines.append(f"  {name:<24} checked={r['checked']:<6} passed={r['passed']:<6} "
                         f"failed={r['failed']:<4} inapplicable={r['inapplicable']}")
        lines += [f"  note: {n}" for n in self.notes]
        for c in self.counterexamples:
            lines.append("  counterexample: " + json.dumps(c, sort_keys=True)[:400])
        return "\n".join(lines)


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SystemExit(f"cannot read {path}: {exc}")


def _write_json(path: Optional[str], data) -> None:
    if path:
        with open(path, "w") as fh:
            json.dump(data, fh, indent=1, sort_keys=True)
            fh.write("\n")


# -- commands ------------------------------------------------------------------

def cmd_verify_relations(max_vertices: int, max_edges: int,
                         kinds: Sequence[str] = RELATION_KINDS) -> Report:
    unknown = [k for k in kinds if k not in RELATION_KINDS]
    if unknown:
        raise SystemExit(f"unknown relation kinds: {unknown}")
    rep = Report("verify-relations", {"max_vertices": max_vertices, "max_edges": max_edges,
                                      "kinds": list(kinds)})
    graphs = enumerate_graphs(max_vertices, max_edges)
    for k in kinds:
        rep.results.setdefault(k, {"checked": 0, "passed": 0, "failed": 0, "inapplicable": 0})
    for g in graphs:
        for inst in relation_instances(g, kinds):
            v = verify_relation(inst)
            rep.record(inst.kind, v.status, {"host": g.to_json(), **v.certificate})
    rep.notes.append(f"{len(graphs)} graphs up to isomorphism")
    return rep.finish()


def cmd_normalize(word: dict) -> tuple:
    rep = Report("normalize", {})
    try:
        w = ElementaryWord.from_json(word)
        before = compose_word(w)
    except (WordError, KeyError, ValueError) as exc:
        raise SystemExit(f"word does not replay: {exc}")
    out = normalize(w)
    after = compose_word(out)
    same = after == before
    rep.record("standard-form", "pass" if out.is_standard() else "fail",
               {"word": out.to_json()})
    rep.record("composite-preserved", "pass" if same else "fail",
               {"before": before.to_json(), "after": after.to_json()})
    rep.config.update(input_length=len(w), output_length=len(out))
    return rep.finish(), out


def cmd_decompose(data: dict) -> tuple:
    rep = Report("decompose", {})
    try:
        m = GraphicalMap.from_json(data)
    except (KeyError, ValueError) as exc:
        raise SystemExit(f"cannot parse map: {exc}")
    problems = check_graphical_map(m)
    if problems:
        raise SystemExit("invalid graphical map: " + "; ".join(problems))
    w = decompose(m)
    back = compose_word(w)
    rep.record("round-trip", "pass" if back == m else "fail", {"word": w.to_json()})
    rep.record("standard-form", "pass" if w.is_standard() else "fail", {"word": w.to_json()})
    rep.config.update(length=len(w))
    return rep.finish(), w


def _presheaf_checks(rep: Report, X, label: str) -> tuple:
    from .presheaf import satisfies_kan, satisfies_segal, validate_presheaf
    problems = validate_presheaf(X)
    rep.record("valid-presheaf", "fail" if problems else "pass",
               {"presheaf": label, "problems": problems[:3]})
    if problems:
        return None, None
    seg, kan = satisfies_segal(X), satisfies_kan(X, strict=True)
    rep.record("verdicts-agree", "pass" if seg.ok == kan.ok else "fail",
               {"presheaf": label, "segal": seg.to_json(), "kan": kan.to_json()})
    return seg, kan


def cmd_check_nerve(operad: dict, max_tree_vertices: int, max_edges: int) -> Report:
    from .operad import CyclicOperad, OperadError, nerve, validate_cyclic_operad
    from .presheaf import build_skeleton
    rep = Report("check-nerve", {"max_tree_vertices": max_tree_vertices, "max_edges": max_edges})
    try:
        O = CyclicOperad.from_json(operad)
    except (KeyError, ValueError, OperadError) as exc:
        raise SystemExit(f"cannot parse operad: {exc}")
    rep.config["operad"] = O.name
    problems = validate_cyclic_operad(O)
    rep.record("operad-axioms", "fail" if problems else "pass", {"problems": problems[:5]})
    sk = build_skeleton(max_tree_vertices, max_edges, True)
    X = nerve(O, sk, drop_undefined=bool(problems))
    seg, kan = _presheaf_checks(rep, X, X.name)
    if seg is not None:
        rep.record("segal", "pass" if seg.ok else "fail", seg.to_json())
        rep.record("strict-kan", "pass" if kan.ok else "fail", kan.to_json())
        rep.notes.append(f"verdicts relative to the tree skeleton {sk.budget}; "
                         f"truncated objects: {len(seg.truncated) + len(kan.truncated)}")
    return rep.finish()


def cmd_segal_kan_sweep(corpus: str) -> Report:
    from .presheaf import GraphicalSet, PresheafError
    rep = Report("segal-kan-sweep", {"corpus": corpus})
    files = sorted(Path(corpus).glob("*.json"))
    rows = []
    for path in files:
        try:
            X = GraphicalSet.from_json(_load_json(str(path)))
        except (KeyError, PresheafError) as exc:
            raise SystemExit(f"malformed presheaf file {path}: {exc}")
        seg, kan = _presheaf_checks(rep, X, path.name)
        if seg is not None:
            rows.append({"file": path.name, "segal": seg.ok, "strict_kan": kan.ok})
    rep.config["files"] = len(files)
    rep.notes += [f"{r['file']}: segal={r['segal']} strict_kan={r['strict_kan']}" for r in rows]
    return rep.finish()


def cmd_make_corpus(out_dir: str, max_vertices: int, max_edges: int,
                    corrupted: int) -> Report:
    """Write representables, the terminal presheaf, nerves and corruptions as presheaf files."""
    from .operad import example_operads, nerve
    from .presheaf import build_skeleton, corruptions, dumps, representable, terminal
    rep = Report("make-corpus", {"out": out_dir, "max_vertices": max_vertices,
                                 "max_edges": max_edges, "corrupted": corrupted})
    sk = build_skeleton(max_vertices, max_edges, True)
    os.makedirs(out_dir, exist_ok=True)
    items = [("terminal", terminal(sk))]
    items += [(f"representable-{g:02d}", representable(sk, g)) for g in range(len(sk))]
    nerves = [(f"nerve-{O.name}", nerve(O, sk)) for O in example_operads(max_edges)]
    items += nerves
    made = 0
    for name, X in [items[0]] + nerves:
        for k, Y in enumerate(corruptions(X)):
            if made >= corrupted:
                break
            items.append((f"corrupt-{name}-{k:02d}", Y))
            made += 1
    for name, X in items:
        with open(os.path.join(out_dir, f"{name}.json"), "w") as fh:
            fh.write(dumps(X))
        rep.record("written", "pass")
    return rep.finish()


def cmd_example_operad(name: str, max_arity: int) -> dict:
    from .operad import example_operads
    table = {O.name: O for O in example_operads(max_arity)}
    if name not in table:
        raise SystemExit(f"unknown operad {name!r}; choose from {sorted(table)}")
    return table[name].to_json()


# -- argument parsing ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    v, e = default_budget()
    parser = argparse.ArgumentParser(prog="graphical-kit",
                                     description="Exhaustive checks for the graphical category.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "text"), default="json")
        return p

    p = common(sub.add_parser("verify-relations", help="check every relation instance"))
    p.add_argument("--max-vertices", type=int, default=v)
    p.add_argument("--max-edges", type=int, default=e)
    p.add_argument("--kinds", default=",".join(RELATION_KINDS),
                   help="comma separated subset of " + ",".join(RELATION_KINDS))

    p = common(sub.add_parser("normalize", help="rewrite a word into standard form"))
    p.add_argument("word_file")
    p.add_argument("--output", "-o", help="where to write the normalized word")

    p = common(sub.add_parser("decompose", help="write a map as a standard-form word"))
    p.add_argument("map_file")
    p.add_argument("--output", "-o", help="where to write the word")

    p = common(sub.add_parser("check-nerve", help="Segal and strict Kan for an operad's nerve"))
    p.add_argument("operad_file")
    p.add_argument("--max-tree-vertices", type=int, default=v)
    p.add_argument("--max-edges", type=int, default=e)

    p = common(sub.add_parser("segal-kan-sweep", help="compare verdicts over presheaf files"))
    p.add_argument("--corpus", required=True)

    p = common(sub.add_parser("make-corpus", help="write a presheaf corpus for the sweep"))
    p.add_argument("out_dir")
    p.add_argument("--max-vertices", type=int, default=2)
    p.add_argument("--max-edges", type=int, default=3)
    p.add_argument("--corrupted", type=int, default=20)

    p = sub.add_parser("example-operad", help="print one of the bundled operads as JSON")
    p.add_argument("name", help="terminal, equality, equality-2col or parity")
    p.add_argument("--max-arity", type=int, default=e)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "example-operad":
        print(json.dumps(cmd_example_operad(args.name, args.max_arity), sort_keys=True))
        return 0
    if args.command == "verify-relations":
        kinds = [k.strip() for k in args.kinds.split(",") if k.strip()]
        rep = cmd_verify_relations(args.max_vertices, args.max_edges, kinds)
    elif args.command == "normalize":
        rep, w = cmd_normalize(_load_json(args.word_file))
        _write_json(args.output, w.to_json())
    elif args.command == "decompose":
        rep, w = cmd_decompose(_load_json(args.map_file))
        _write_json(args.output, w.to_json())
    elif args.command == "check-nerve":
        rep = cmd_check_nerve(_load_json(args.operad_file), args.max_tree_vertices,
                              args.max_edges)
    elif args.command == "segal-kan-sweep":
        rep = cmd_segal_kan_sweep(args.corpus)
    else:
        rep = cmd_make_corpus(args.out_dir, args.max_vertices, args.max_edges, args.corrupted)
    if args.format == "text":
        print(rep.to_text())
    else:
        print(json.dumps(rep.to_json(), sort_keys=True))
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
