"""Cross-checked analysis, random network generation and corpus benchmarks."""
from __future__ import annotations

import csv
import json
import logging
import random
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .graph import create_graph, is_unconditionally_binomial_graph, transform
from .matrix import build_matrix, is_unconditionally_binomial_matrix, rref
from .network import ReactionNetwork, build_network, parse_batch
from .verdict import Verdict

__all__ = [
    "AnalysisReport",
    "BenchResult",
    "CSV_COLUMNS",
    "METHODS",
    "MethodDisagreement",
    "RandomNetworkSpec",
    "analyze",
    "bench",
    "generate_random",
    "read_report_csv",
    "write_report_csv",
]

log = logging.getLogger(__name__)

METHODS = ("matrix", "graph", "both")
CSV_COLUMNS = ("model", "n", "r", "verdict", "t_matrix_ms", "t_graph_ms", "speedup")


class MethodDisagreement(RuntimeError):
    """The two methods returned different verdicts: an implementation bug."""

    def __init__(self, model: str, matrix: dict, graph: dict):
        self.model = model
        self.matrix = matrix
        self.graph = graph
        super().__init__(f"{model}: matrix says {matrix['verdict']}, graph says {graph['verdict']}")

    def __reduce__(self):
        return (MethodDisagreement, (self.model, self.matrix, self.graph))


@dataclass
class AnalysisReport:
    model: str
    method: str
    verdict: Verdict
    n: int
    r: int
    t_matrix_ns: int | None = None
    t_graph_ns: int | None = None
    agreement: bool | None = None
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def t_matrix_ms(self) -> float | None:
        return None if self.t_matrix_ns is None else self.t_matrix_ns / 1e6

    @property
    def t_graph_ms(self) -> float | None:
        return None if self.t_graph_ns is None else self.t_graph_ns / 1e6

    @property
    def speedup(self) -> float | None:
        if self.t_matrix_ns is None or self.t_graph_ns is None:
            return None
        return self.t_matrix_ns / self.t_graph_ns

    def to_dict(self) -> dict[str, Any]:
        out = {
            "model": self.model,
            "method": self.method,
            "verdict": self.verdict.value,
            "n": self.n,
            "r": self.r,
        }
        if self.agreement is not None:
            out["agreement"] = self.agreement
        out["t_matrix_ms"] = self.t_matrix_ms
        out["t_graph_ms"] = self.t_graph_ms
        out["diagnostics"] = self.diagnostics
        return out


def _run_matrix(net: ReactionNetwork):
    t0 = time.perf_counter_ns()
    m = build_matrix(net)
    red = rref(m)
    mv = is_unconditionally_binomial_matrix(red)
    elapsed = max(time.perf_counter_ns() - t0, 1)
    diag = {
        "verdict": mv.verdict.value,
        "rank": red.rank,
        "pivot_rows": [red.row_labels[i] for i, _ in red.pivots],
        "violating_rows": mv.violating_rows,
    }
    return mv.verdict, elapsed, diag


def _run_graph(net: ReactionNetwork):
    t0 = time.perf_counter_ns()
    g = transform(create_graph(net))
    gv = is_unconditionally_binomial_graph(g)
    elapsed = max(time.perf_counter_ns() - t0, 1)
    names = [s.name for s in g.species]
    diag = {
        "verdict": gv.verdict.value,
        "marked": [names[i] for i, m in enumerate(g.marked) if m],
        "components": [
            {"species": [names[s] for s in c.species],
             "reactions": [g.reaction_names[r] for r in c.reactions]}
            for c in gv.summary.nontrivial()
        ],
        "violating_components": len(gv.violating),
        "isolated_reactions": [g.reaction_names[r] for r in gv.isolated_reactions],
    }
    if gv.isolated_reactions:
        log.info("isolated reaction vertices after rewriting: %s", diag["isolated_reactions"])
    return gv.verdict, elapsed, diag


def analyze(net: ReactionNetwork, method: str = "both", model: str = "model") -> AnalysisReport:
    """Run the requested method(s); with ``both``, disagreement raises
    :class:`MethodDisagreement`.  Timings cover the algorithms only."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    report = AnalysisReport(model, method, Verdict.BINOMIAL, net.n_species, net.n_reactions)
    verdicts = {}
    if method in ("matrix", "both"):
        v, report.t_matrix_ns, report.diagnostics["matrix"] = _run_matrix(net)
        verdicts["matrix"] = v
    if method in ("graph", "both"):
        v, report.t_graph_ns, report.diagnostics["graph"] = _run_graph(net)
        verdicts["graph"] = v
    if method == "both":
        report.agreement = verdicts["matrix"] == verdicts["graph"]
        if not report.agreement:
            raise MethodDisagreement(model, report.diagnostics["matrix"], report.diagnostics["graph"])
    report.verdict = next(iter(verdicts.values()))
    return report


# ---------------------------------------------------------------------------
# random networks


@dataclass(frozen=True)
class RandomNetworkSpec:
    seed: int
    species: tuple[int, int] = (2, 8)
    reactions: tuple[int, int] = (1, 8)
    max_coefficient: int = 3
    max_complex_size: int = 3

    def __post_init__(self):
        for name in ("species", "reactions"):
            lo, hi = getattr(self, name)
            if lo < 1 or lo > hi:
                raise ValueError(f"bad {name} range {lo}..{hi}")
        if self.max_coefficient < 1 or self.max_complex_size < 1:
            raise ValueError("max_coefficient and max_complex_size must be >= 1")


def generate_random(spec: RandomNetworkSpec) -> ReactionNetwork:
    """Deterministic random reversible network.

    Every species occurs in at least one complex (the species count is capped
    at the number of complex slots) and no reaction has identical sides.
    Species are named ``S1``, ``S2``, ... in order of first appearance.
    """
    rng = random.Random(spec.seed)
    r = rng.randint(*spec.reactions)
    n = min(rng.randint(*spec.species), 2 * r * spec.max_complex_size)
    # spread the species over the 2r complexes so each is used at least once
    forced: list[list[int]] = [[] for _ in range(2 * r)]
    order = list(range(n))
    rng.shuffle(order)
    slots = list(range(2 * r))
    rng.shuffle(slots)
    for i, s in enumerate(order):
        forced[slots[i % (2 * r)]].append(s)

    def draw(must: list[int]) -> dict[int, int]:
        size = rng.randint(max(1, len(must)), max(spec.max_complex_size, len(must)))
        pool = [s for s in range(n) if s not in must]
        extra = rng.sample(pool, min(size - len(must), len(pool)))
        return {s: rng.randint(1, spec.max_coefficient) for s in must + extra}

    pairs = []
    for i in range(r):
        lhs = draw(forced[2 * i])
        for _ in range(1000):
            rhs = draw(forced[2 * i + 1])
            if rhs != lhs:
                break
        else:
            raise ValueError(f"cannot draw a non-degenerate reaction for {spec}")
        pairs.append((lhs, rhs))

    first: dict[int, int] = {}
    for lhs, rhs in pairs:
        for side in (lhs, rhs):
            for s in sorted(side):
                first.setdefault(s, len(first))
    named = [
        tuple({f"S{first[s] + 1}": c for s, c in sorted(side.items(), key=lambda kv: first[kv[0]])}
              for side in pair)
        for pair in pairs
    ]
    return build_network(named)


# ---------------------------------------------------------------------------
# benchmark


def _fmt_ms(ns: int | None) -> str:
    return "" if ns is None else f"{ns / 1e6:.6f}"


def _row(report: AnalysisReport) -> dict[str, str]:
    sp = report.speedup
    return {
        "model": report.model,
        "n": str(report.n),
        "r": str(report.r),
        "verdict": report.verdict.value,
        "t_matrix_ms": _fmt_ms(report.t_matrix_ns),
        "t_graph_ms": _fmt_ms(report.t_graph_ns),
        "speedup": "" if sp is None else f"{sp:.4f}",
    }


def write_report_csv(reports: list[AnalysisReport], path) -> None:
    """Write the CSV report to a path or an open text stream."""
    if hasattr(path, "write"):
        _write_rows(reports, path)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        _write_rows(reports, fh)


def _write_rows(reports, fh) -> None:
    w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for rep in reports:
        w.writerow(_row(rep))


def read_report_csv(path: str | Path) -> list[AnalysisReport]:
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        for row in reader:
            tm = row["t_matrix_ms"]
            tg = row["t_graph_ms"]
            out.append(AnalysisReport(
                model=row["model"],
                method="both",
                verdict=Verdict(row["verdict"]),
                n=int(row["n"]),
                r=int(row["r"]),
                t_matrix_ns=round(float(tm) * 1e6) if tm else None,
                t_graph_ns=round(float(tg) * 1e6) if tg else None,
                agreement=True,
            ))
    return out


@dataclass
class BenchResult:
    reports: list[AnalysisReport] = field(default_factory=list)
    errors: list[dict[str, str]] = field(default_factory=list)

    @property
    def disagreements(self) -> list[dict[str, str]]:
        return [e for e in self.errors if e["kind"] == "disagreement"]

    def median_speedup(self) -> float | None:
        sps = [r.speedup for r in self.reports if r.speedup is not None]
        return statistics.median(sps) if sps else None

    def median_times_ms(self) -> tuple[float | None, float | None]:
        tm = [r.t_matrix_ms for r in self.reports]
        tg = [r.t_graph_ms for r in self.reports]
        return (statistics.median(tm) if tm else None, statistics.median(tg) if tg else None)

    def summary_line(self) -> str:
        sp = self.median_speedup()
        med = "n/a" if sp is None else f"{sp:.4f}"
        return (f"models: {len(self.reports)}  errors: {len(self.errors)}  "
                f"median speedup (matrix/graph): {med}")

    def to_json(self) -> dict[str, Any]:
        tm, tg = self.median_times_ms()
        return {
            "models": [r.to_dict() for r in self.reports],
            "errors": self.errors,
            "summary": {
                "models": len(self.reports),
                "errors": len(self.errors),
                "median_speedup": self.median_speedup(),
                "median_t_matrix_ms": tm,
                "median_t_graph_ms": tg,
            },
        }


def _bench_one(item: tuple[str, ReactionNetwork]):
    name, net = item
    try:
        return analyze(net, "both", name), None
    except MethodDisagreement as exc:
        return None, {"model": name, "kind": "disagreement", "error": str(exc)}


def bench(
    corpus: str | Path,
    out: str | Path | None = None,
    json_out: str | Path | None = None,
    threads: int = 1,
    assume_reversible: bool = False,
) -> BenchResult:
    """Analyze every model of a corpus with both methods.

    Results keep corpus order regardless of ``threads``; workers are
    separate processes so timings are not skewed by the GIL.
    """
    corpus = Path(corpus)
    if not corpus.exists():
        raise FileNotFoundError(corpus)
    batch = parse_batch(corpus, assume_reversible=assume_reversible)
    result = BenchResult()
    result.errors.extend({"model": m, "kind": "parse", "error": e} for m, e in batch.errors)
    if threads > 1 and len(batch.models) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(_bench_one, batch.models))
    else:
        outcomes = [_bench_one(item) for item in batch.models]
    for report, err in outcomes:
        if report is not None:
            result.reports.append(report)
        else:
            result.errors.append(err)
    if out is not None:
        write_report_csv(result.reports, out)
    if json_out is not None:
        with open(json_out, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(result.to_json(), fh, indent=2)
            fh.write("\n")
    return result
