"""Binomial coefficient matrix, exact Gauss-Jordan reduction and the row criterion.

A network is unconditionally binomial iff the reduced row echelon form of
its binomial coefficient matrix has at most one nonzero entry in every row.
All arithmetic is over exact rationals (``gmpy2.mpq``).  Elimination is the
plain cubic Gauss-Jordan; zero entries are skipped but the matrix is stored
densely.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Sequence

from gmpy2 import mpq

from .decomposition import species_coefficient
from .network import ReactionNetwork, ReversibleReaction
from .verdict import Verdict

__all__ = [
    "BinomialCoefficientMatrix",
    "MatrixVerdict",
    "RrefResult",
    "binomial_name",
    "build_matrix",
    "format_table",
    "is_unconditionally_binomial_matrix",
    "matrix_json",
    "pivot_steps",
    "rref",
]

Matrix = list[list[mpq]]


def binomial_name(rx: ReversibleReaction) -> str:
    """Column label: ``b12`` for labels ``k12``, else ``b(<forward label>)``."""
    fwd = rx.forward_label
    if fwd.startswith("k") and fwd[1:].replace("_", "").isdigit():
        return "b" + fwd[1:]
    return f"b({fwd})"


@dataclass(frozen=True)
class BinomialCoefficientMatrix:
    """Integer matrix, rows = species, columns = non-degenerate reactions."""

    entries: tuple[tuple[int, ...], ...]
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    reactions: tuple[int, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_labels), len(self.col_labels)

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.entries]


def build_matrix(net: ReactionNetwork) -> BinomialCoefficientMatrix:
    cols = net.nondegenerate()
    entries = tuple(
        tuple(species_coefficient(rx, s) for rx in cols) for s in net.species
    )
    return BinomialCoefficientMatrix(
        entries=entries,
        row_labels=tuple(s.name for s in net.species),
        col_labels=tuple(binomial_name(rx) for rx in cols),
        reactions=tuple(rx.index for rx in cols),
    )


@dataclass
class RrefResult:
    """Reduced row echelon form.

    ``row_labels[i]`` names the original row that was swapped into position
    ``i`` before reduction (``None`` when the input carried no labels).
    """

    matrix: Matrix
    pivots: list[tuple[int, int]]
    rank: int
    row_labels: tuple[str, ...] | None = None
    col_labels: tuple[str, ...] | None = None


def _as_rows(m) -> tuple[Matrix, int, tuple[str, ...] | None, tuple[str, ...] | None]:
    if isinstance(m, BinomialCoefficientMatrix):
        rows = [[mpq(x) for x in row] for row in m.entries]
        return rows, len(m.col_labels), m.row_labels, m.col_labels
    if isinstance(m, RrefResult):
        rows = [[mpq(x) for x in row] for row in m.matrix]
        ncols = len(m.col_labels) if m.col_labels is not None else (len(rows[0]) if rows else 0)
        return rows, ncols, m.row_labels, m.col_labels
    rows = [[mpq(x) for x in row] for row in m]
    return rows, (len(rows[0]) if rows else 0), None, None


def rref(m: BinomialCoefficientMatrix | RrefResult | Sequence[Sequence]) -> RrefResult:
    """Gauss-Jordan over the rationals.

    Pivots are chosen deterministically: columns left to right, the topmost
    nonzero entry at or below the current pivot row.
    """
    rows, ncols, row_labels, col_labels = _as_rows(m)
    nrows = len(rows)
    labels = list(row_labels) if row_labels is not None else None
    pivots: list[tuple[int, int]] = []
    pr = 0
    for c in range(ncols):
        if pr == nrows:
            break
        p = next((i for i in range(pr, nrows) if rows[i][c]), None)
        if p is None:
            continue
        if p != pr:
            rows[pr], rows[p] = rows[p], rows[pr]
            if labels is not None:
                labels[pr], labels[p] = labels[p], labels[pr]
        # entries left of c in the pivot row are already zero
        prow = rows[pr]
        piv = prow[c]
        if piv != 1:
            for j in range(c, ncols):
                if prow[j]:
                    prow[j] = prow[j] / piv
        nz = [(j, prow[j]) for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i == pr:
                continue
            row = rows[i]
            f = row[c]
            if not f:
                continue
            for j, x in nz:
                row[j] -= f * x
        pivots.append((pr, c))
        pr += 1
    return RrefResult(rows, pivots, len(pivots),
                      tuple(labels) if labels is not None else None, col_labels)


@dataclass(frozen=True)
class MatrixVerdict:
    verdict: Verdict
    violating_rows: list[str]


def is_unconditionally_binomial_matrix(r: RrefResult) -> MatrixVerdict:
    """At most one nonzero entry per row of the RREF.

    Violating rows are reported by the label of the row that carries them
    (or by 1-based position when the matrix is unlabeled).
    """
    bad = []
    for i, row in enumerate(r.matrix):
        if sum(1 for x in row if x) > 1:
            bad.append(r.row_labels[i] if r.row_labels is not None else str(i + 1))
    return MatrixVerdict(Verdict.of(not bad), bad)


def pivot_steps(entries: Sequence[Sequence]) -> Iterator[tuple[int, int | None, Matrix]]:
    """Column-by-column elimination without row swaps or pivot normalisation.

    For each column ``c`` the pivot is the first row (in original order) that
    is not yet a pivot row and has a nonzero entry in ``c``; every other row
    with a nonzero in ``c`` is cleared by adding a multiple of the pivot row.
    Yields ``(c, pivot_row_or_None, matrix)``; the matrix object is reused
    between steps, so copy it if a snapshot is needed.
    """
    rows = [[mpq(x) for x in row] for row in entries]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    used = [False] * nrows
    for c in range(ncols):
        p = next((i for i in range(nrows) if not used[i] and rows[i][c]), None)
        if p is not None:
            used[p] = True
            prow = rows[p]
            piv = prow[c]
            nz = [j for j in range(ncols) if j != c and prow[j]]
            for i in range(nrows):
                if i == p or not rows[i][c]:
                    continue
                row = rows[i]
                mult = -row[c] / piv
                row[c] = mpq(0)
                for j in nz:
                    row[j] += mult * prow[j]
        yield c, p, rows


def format_table(rows: Sequence[Sequence], row_labels: Sequence[str], col_labels: Sequence[str]) -> str:
    """Right-aligned text table with row and column labels."""
    cells = [[str(x) for x in row] for row in rows]
    lw = max([len(s) for s in row_labels] + [0])
    widths = [max([len(col_labels[j])] + [len(r[j]) for r in cells]) for j in range(len(col_labels))]
    lines = [" " * lw + "".join("  " + h.rjust(w) for h, w in zip(col_labels, widths))]
    for label, r in zip(row_labels, cells):
        lines.append(label.ljust(lw) + "".join("  " + v.rjust(w) for v, w in zip(r, widths)))
    return "\n".join(line.rstrip() for line in lines)


def matrix_json(rows: Sequence[Sequence], row_labels: Sequence[str], col_labels: Sequence[str]) -> dict:
    return {
        "rows": list(row_labels),
        "cols": list(col_labels),
        "entries": [[str(x) for x in row] for row in rows],
    }


def dumps_matrix(rows, row_labels, col_labels) -> str:
    return json.dumps(matrix_json(rows, row_labels, col_labels), indent=2)
