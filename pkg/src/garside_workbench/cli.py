"""Command-line front end.

Exit codes: 0 every check passed, 1 a check failed (witnesses are printed),
2 bad input or environment.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from . import examples
from .artin import (
    GraphCheckError,
    SimpleSet,
    check_gluing_hypotheses,
    check_reflection_criterion,
    check_reflection_factorization,
    cyclic_simple_set,
    glued_simple_set,
    is_cyclic_type,
)
from .coxeter import DEFAULT_CAP, CoxeterGraph, NotFiniteError, OrientationError
from .garside import GarsideStructure, StructureError
from .partialmul import (
    CheckReport,
    PartialMulTable,
    TableError,
    boolean_table,
    check_garside_criterion,
    doubled_poset,
    free_table,
    verify_axioms,
)
from .poset import PosetError, is_lattice
from .presentations import (
    PositivePresentation,
    PresentationError,
    check_square,
    check_systolic_shape,
    check_t5,
    gnm_presentation,
    subword_table,
    surface_presentation,
    systolic_form,
)

log = logging.getLogger("garside_workbench")

CACHE_VERSION = 1
CACHE_FORMAT = "garside-workbench-cache"


class InputError(Exception):
    """Malformed input or unusable environment (exit code 2)."""


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    fmt: str = "text"
    cache_dir: Optional[Path] = None
    override_graph_check: bool = False
    jobs: int = 1
    max_elements: int = DEFAULT_CAP


# ---------------------------------------------------------------------------
# cache


class Cache:
    """JSON files keyed by a hash of the canonical input, with a versioned header."""

    def __init__(self, root: Optional[Path]):
        self.root = root

    @staticmethod
    def key(kind: str, data: Any) -> str:
        blob = json.dumps({"kind": kind, "v": CACHE_VERSION, "data": data}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:32]

    def _path(self, kind: str, key: str) -> Path:
        assert self.root is not None
        return self.root / f"{kind}-{key}.json"

    def get(self, kind: str, data: Any) -> Optional[Any]:
        if self.root is None:
            return None
        key = self.key(kind, data)
        p = self._path(kind, key)
        try:
            doc = json.loads(p.read_text())
        except (OSError, ValueError):
            return None
        if doc.get("format") != CACHE_FORMAT or doc.get("version") != CACHE_VERSION or doc.get("key") != key:
            log.info("ignoring stale cache file %s", p)
            return None
        return doc["payload"]

    def put(self, kind: str, data: Any, payload: Any) -> None:
        if self.root is None:
            return
        self.root.mkdir(parents=True, exist_ok=True)
        key = self.key(kind, data)
        doc = {"format": CACHE_FORMAT, "version": CACHE_VERSION, "kind": kind, "key": key, "payload": payload}
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
        with os.fdopen(fd, "w") as fh:
            json.dump(doc, fh, sort_keys=True)
        os.replace(tmp, self._path(kind, key))


def default_cache_dir() -> Optional[Path]:
    env = os.environ.get("GARSIDE_CACHE")
    return Path(env) if env else None


# ---------------------------------------------------------------------------
# input loading


def _read_json(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _load_graph(data: Any, path: str) -> CoxeterGraph:
    try:
        return CoxeterGraph.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: malformed coxgraph: {exc}") from None


def simple_set_for(G: CoxeterGraph, cfg: RunConfig, cache: Cache) -> SimpleSet:
    """Cyclic construction for unoriented cyclic-type graphs, glued construction otherwise."""
    cached = cache.get("ucert", G.to_json())
    if cached is not None:
        return SimpleSet.from_json(cached)
    if G.orientation is None and is_cyclic_type(G):
        U = cyclic_simple_set(G, max_elements=cfg.max_elements)
    else:
        U = glued_simple_set(G, override_graph_check=True, max_elements=cfg.max_elements)
    cache.put("ucert", G.to_json(), U.to_json())
    return U


def table_for(data: Any, path: str, cfg: RunConfig, cache: Cache) -> PartialMulTable:
    """Accepts pmul.json, pres.json, coxgraph.json or ucert.json."""
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    try:
        if "products" in data:
            return PartialMulTable.from_json(data)
        if "members" in data:
            return SimpleSet.from_json(data).table()
        if "relations" in data:
            cached = cache.get("table", data)
            if cached is not None:
                return PartialMulTable.from_json(cached)
            T = subword_table(PositivePresentation.from_json(data))
            cache.put("table", data, T.to_json())
            return T
        if "vertices" in data:
            return simple_set_for(_load_graph(data, path), cfg, cache).table()
    except (TableError, PresentationError) as exc:
        raise InputError(f"{path}: {exc}") from None
    raise InputError(f"{path}: unrecognised input (expected a table, presentation, graph or certificate)")


# ---------------------------------------------------------------------------
# commands; each returns (exit code, document)


def _verdict(reports: list[CheckReport]) -> int:
    return 0 if all(r.passed for r in reports) else 1


def _doc(command: str, path: str, reports: list[CheckReport], **extra) -> dict:
    d = {"command": command, "input": path, "verdict": "pass" if _verdict(reports) == 0 else "fail",
         "reports": [r.to_dict() for r in reports]}
    d.update(extra)
    return d


def cmd_check_pmul(path: str, cfg: RunConfig) -> tuple[int, dict]:
    data = _read_json(path)
    try:
        T = PartialMulTable.from_json(data)
    except TableError as exc:
        raise InputError(f"{path}: {exc}") from None
    reports = [verify_axioms(T)]
    if reports[0].passed:
        reports.append(check_garside_criterion(T))
    return _verdict(reports), _doc("check-pmul", path, reports, elements=len(T))


def _graph_report(G: CoxeterGraph) -> CheckReport:
    if G.orientation is None and is_cyclic_type(G):
        rep = CheckReport("graph_hypotheses")
        rep.info["construction"] = "cyclic"
        return rep
    if G.orientation is None and G.large_edges():
        rep = CheckReport("graph_hypotheses")
        rep.add("orientation_missing", tuple(sorted(map(sorted, G.large_edges()))))
        return rep
    rep = check_gluing_hypotheses(G)
    rep.info["construction"] = "glued"
    return rep


def cmd_artin(sub: str, path: str, cfg: RunConfig, cache: Cache) -> tuple[int, dict]:
    G = _load_graph(_read_json(path), path)
    graph_rep = _graph_report(G)
    if sub == "negative":
        U = simple_set_for(G, cfg, cache)
        T = U.table()
        ax = verify_axioms(T)
        crit = check_garside_criterion(T) if ax.passed else None
        reports = [graph_rep, ax] + ([crit] if crit is not None else [])
        failing = crit if crit is not None else ax
        cond = "mixed_join" if failing.first("mixed_join") is not None else None
        w = failing.first(cond)
        extra = {"elements": len(U)}
        if w is not None:
            cond = cond or failing.violations[0][0]
            extra["first_violation"] = {"condition": cond, "witness": list(w)}
        doc = _doc("artin negative", path, reports, **extra)
        return (1 if w is not None else 0), doc
    if not graph_rep.passed and not cfg.override_graph_check:
        return 1, _doc(f"artin {sub}", path, [graph_rep])
    U = simple_set_for(G, cfg, cache)
    reports = [graph_rep, check_reflection_factorization(U), check_reflection_criterion(U)]
    extra: dict = {"elements": len(U), "reflections": len(U.reflections)}
    if sub == "build":
        T = U.table()
        ax = verify_axioms(T)
        reports.append(ax)
        if ax.passed:
            reports.append(check_garside_criterion(T))
            E = doubled_poset(T)
            v = is_lattice(E.poset)
            lat = CheckReport("lattice_E")
            if not v:
                lat.add("bowtie", v.bowtie)
            lat.info["elements"] = len(E.poset)
            reports.append(lat)
            extra["E_dot"] = E.poset.to_dot(names=lambda x: str(x[0]) if x[1] == 0 else "~" + str(x[0]))
        extra["ucert"] = U.to_json()
    return _verdict(reports), _doc(f"artin {sub}", path, reports, **extra)


def cmd_pres(path: str, cfg: RunConfig) -> tuple[int, dict]:
    data = _read_json(path)
    try:
        P = PositivePresentation.from_json(data)
    except PresentationError as exc:
        raise InputError(f"{path}: {exc}") from None
    hyps = [check_t5(P)]
    if all(len(l) == 2 and len(r) == 2 for l, r in P.relations):
        hyps.append(check_square(P))
    hyps.append(check_systolic_shape(P))
    T = subword_table(P)
    reports = [verify_axioms(T)]
    if reports[0].passed:
        reports.append(check_garside_criterion(T))
    return _verdict(reports), _doc("pres", path, reports, elements=len(T),
                                   hypotheses=[h.to_dict() for h in hyps])


def cmd_nf(path: str, word: str, cfg: RunConfig, cache: Cache) -> tuple[int, dict]:
    T = table_for(_read_json(path), path, cfg, cache)
    try:
        G = GarsideStructure.from_table(T)
    except (StructureError, PosetError) as exc:
        return 1, {"command": "nf", "input": path, "verdict": "fail", "error": f"not a Garside structure: {exc}"}
    try:
        nf = G.normal_form(word)
    except KeyError as exc:
        raise InputError(str(exc.args[0]) if exc.args else "unknown simple") from None
    return 0, {"command": "nf", "input": path, "word": word, "delta": G.render(G.delta),
               "normal_form": nf.to_dict(G.render)}


# ---------------------------------------------------------------------------
# gen


def _gen(args: argparse.Namespace) -> Any:
    name = args.name
    params = args.params
    if name in ("cyclic", "table1"):
        if len(params) != 1:
            raise InputError("gen cyclic needs one label list such as 3-3-3-5")
        try:
            G = examples.cycle_graph(examples.parse_label_cycle(params[0]))
        except ValueError as exc:
            raise InputError(str(exc)) from None
        return G.to_json()
    if name in ("square", "figure2"):
        return examples.square_raag().to_json()
    if name in ("label4-line", "figure3"):
        n = int(params[0]) if params else 7
        return examples.label4_line(n).to_json()
    if name in ("glued-cycles", "figure1"):
        k = int(params[0]) if params else 5
        return examples.glued_cycles(k).to_json()
    if name == "spherical":
        if len(params) != 1:
            raise InputError("gen spherical needs a type such as B3")
        try:
            return examples.spherical_graph(params[0]).to_json()
        except ValueError as exc:
            raise InputError(str(exc)) from None
    if name == "surface":
        try:
            return surface_presentation(args.genus, not args.nonorientable).to_json()
        except PresentationError as exc:
            raise InputError(str(exc)) from None
    if name == "gnm":
        if len(params) != 2:
            raise InputError("gen gnm needs n and m")
        P = gnm_presentation(int(params[0]), int(params[1]))
        return (systolic_form(P) if args.systolic else P).to_json()
    if name == "free":
        return free_table(params or ["s1", "s2"]).to_json()
    if name == "boolean":
        return boolean_table(list(params[0]) if params else ["x", "y", "z"]).to_json()
    raise InputError(f"unknown example {name!r}")


# ---------------------------------------------------------------------------
# output


def _render_text(doc: dict) -> str:
    lines = []
    if "normal_form" in doc:
        nf = doc["normal_form"]
        return f"inf: {nf['inf']}\nfactors: {' '.join(nf['factors']) or '-'}"
    if "error" in doc:
        return f"{doc['input']}: {doc['error']}"
    lines.append(f"{doc['command']} {doc['input']}: {doc['verdict']}")
    for k in ("elements", "reflections"):
        if k in doc:
            lines.append(f"  {k}: {doc[k]}")
    for h in doc.get("hypotheses", []):
        lines.append(f"  ({h['verdict']}) {h['check']}")
    for r in doc["reports"]:
        lines.append(f"  [{r['verdict']}] {r['check']}")
        for v in r["violations"]:
            lines.append(f"      {v['condition']}: {v['witness']}")
        for c, n in r["counts"].items():
            lines.append(f"      {c}: {n} violation(s)")
    if "first_violation" in doc:
        fv = doc["first_violation"]
        lines.append(f"  first violation: {fv['condition']} {tuple(fv['witness'])}")
    return "\n".join(lines)


def _render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True)
    if fmt == "dot":
        if "E_dot" in doc:
            return doc["E_dot"]
        raise InputError("dot output is only available for 'artin build'")
    body = {k: v for k, v in doc.items() if k not in ("ucert", "E_dot")}
    return _render_text(body)


# ---------------------------------------------------------------------------
# driver


def _run_one(task: tuple[str, str, RunConfig]) -> tuple[int, Any]:
    kind, path, cfg = task
    cache = Cache(cfg.cache_dir)
    try:
        if kind == "check-pmul":
            return cmd_check_pmul(path, cfg)
        if kind == "pres":
            return cmd_pres(path, cfg)
        return cmd_artin(kind.split()[1], path, cfg, cache)
    except InputError as exc:
        return 2, str(exc)
    except (GraphCheckError, OrientationError, NotFiniteError, PosetError) as exc:
        return 2, f"{path}: {exc}"
    except ValueError as exc:
        if "field context" in str(exc):
            return 2, f"{path}: {exc}"
        raise


def _run_many(kind: str, cfg: RunConfig) -> list[tuple[int, Any]]:
    tasks = [(kind, p, cfg) for p in cfg.inputs]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(cfg.jobs, len(tasks))) as ex:
            return list(ex.map(_run_one, tasks))
    return [_run_one(t) for t in tasks]


def _emit(results: list[tuple[int, Any]], cfg: RunConfig) -> int:
    code = 0
    docs = []
    for rc, doc in results:
        code = max(code, rc)
        if rc == 2:
            print(f"error: {doc}", file=sys.stderr)
        else:
            docs.append(doc)
    if cfg.fmt == "json":
        out = docs[0] if len(cfg.inputs) == 1 and docs else docs
        print(json.dumps(out, indent=2, sort_keys=True))
        return code
    try:
        text = [_render(d, cfg.fmt) for d in docs]
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for t in text:
        print(t)
    return code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "dot", "text"], default=argparse.SUPPRESS)
    common.add_argument("--cache-dir", default=argparse.SUPPRESS,
                        help="computation cache (default: $GARSIDE_CACHE, else no cache)")
    common.add_argument("--override-graph-check", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS,
                        help="worker processes for multiple inputs (default: all cores)")
    common.add_argument("--max-elements", type=int, default=argparse.SUPPRESS,
                        help="cap on enumerated group or simple-set elements")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="garside-workbench", parents=[common],
                                description="Check Garside criteria for partial multiplications, Artin groups and positive presentations.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check-pmul", parents=[common], help="axioms and join criterion for pmul.json")
    c.add_argument("paths", nargs="+")

    a = sub.add_parser("artin", parents=[common], help="simple sets inside Coxeter groups")
    a.add_argument("mode", choices=["check", "build", "negative"])
    a.add_argument("paths", nargs="+")
    a.add_argument("--out", help="write ucert.json here ('build' only)")

    r = sub.add_parser("pres", parents=[common], help="T(5) or square checks for pres.json")
    r.add_argument("paths", nargs="+")

    n = sub.add_parser("nf", parents=[common], help="normal form of a word of simples")
    n.add_argument("structure", help="pmul.json, pres.json, coxgraph.json or ucert.json")
    n.add_argument("word", help="space-separated simple ids; a trailing ' inverts; ~e or Δ is the Garside element")

    g = sub.add_parser("gen", parents=[common], help="write an example input file")
    g.add_argument("name", help="cyclic|table1, square|figure2, label4-line|figure3, glued-cycles|figure1, "
                                "spherical, surface, gnm, free, boolean")
    g.add_argument("params", nargs="*")
    g.add_argument("--genus", type=int, default=2)
    g.add_argument("--nonorientable", action="store_true")
    g.add_argument("--systolic", action="store_true", help="gnm: rewrite every relator word as w = y")
    g.add_argument("-o", "--output")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    opt = lambda k, d: getattr(args, k, d)
    logging.basicConfig(level=logging.INFO if opt("verbose", False) else logging.WARNING,
                        format="%(levelname)s %(message)s")
    cache_dir = opt("cache_dir", None)
    cfg = RunConfig(
        command=args.command,
        fmt=opt("format", "text"),
        cache_dir=Path(cache_dir) if cache_dir else default_cache_dir(),
        override_graph_check=opt("override_graph_check", False),
        jobs=opt("jobs", os.cpu_count() or 1),
        max_elements=opt("max_elements", DEFAULT_CAP),
    )
    if cfg.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return 2
    try:
        if args.command == "gen":
            doc = _gen(args)
            text = json.dumps(doc, indent=2, sort_keys=True)
            if args.output:
                Path(args.output).write_text(text + "\n")
            else:
                print(text)
            return 0
        if args.command == "nf":
            rc, doc = cmd_nf(args.structure, args.word, cfg, Cache(cfg.cache_dir))
            print(json.dumps(doc, indent=2, sort_keys=True) if cfg.fmt == "json" else _render_text(doc))
            return rc
        cfg.inputs = list(args.paths)
        kind = f"artin {args.mode}" if args.command == "artin" else args.command
        results = _run_many(kind, cfg)
        if args.command == "artin" and args.out:
            if args.mode != "build" or len(results) != 1:
                raise InputError("--out needs 'artin build' with exactly one input graph")
            rc, doc = results[0]
            if rc != 2:
                Path(args.out).write_text(json.dumps(doc["ucert"], indent=2, sort_keys=True) + "\n")
        return _emit(results, cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, TableError, PresentationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
