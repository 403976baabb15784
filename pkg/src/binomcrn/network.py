"""Reaction network data model, the text DSL parser and batch loading.

A model is written as chains of complexes joined by ``<=>``::

    # two reactions sharing complex C
    A + B <=> C <=> A + 2 D

A chain of ``m`` complexes yields ``m - 1`` reversible reactions.  Rate
constant labels are generated per reaction ordinal (``k12``/``k21`` for the
first reaction, ``k23``/``k32`` for the second, ...) unless given explicitly
as ``A <=>[kf][kb] B``.  Irreversible arrows (``->``) are only accepted with
``assume_reversible=True``, which adds a free reverse rate constant.
"""
from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "Batch",
    "Complex",
    "DegenerateReactionWarning",
    "ParseError",
    "ReactionNetwork",
    "ReversibleReaction",
    "SpeciesId",
    "build_network",
    "format_network",
    "parse_batch",
    "parse_batch_text",
    "parse_network",
    "rate_label",
]

MAX_COEFFICIENT = 2**32 - 1
_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class ParseError(ValueError):
    """Syntax or semantic error in DSL input, with a 1-based position."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class DegenerateReactionWarning(UserWarning):
    """A reaction whose reactant and product complexes coincide."""


@dataclass(frozen=True, order=True)
class SpeciesId:
    index: int
    name: str = field(compare=False)

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"negative species index {self.index}")
        if not _NAME_RE.match(self.name):
            raise ValueError(f"invalid species name {self.name!r}")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Complex(Mapping):
    """Multiset of species with positive integer stoichiometric coefficients.

    Behaves as a read-only mapping ``SpeciesId -> int``; species that do not
    occur map to 0 through :meth:`get` and ``c[s]``.
    """

    terms: tuple[tuple[SpeciesId, int], ...] = ()

    def __post_init__(self):
        merged: dict[SpeciesId, int] = {}
        for sid, coeff in self.terms:
            if coeff < 0:
                raise ValueError(f"negative coefficient for {sid.name}")
            if coeff:
                merged[sid] = merged.get(sid, 0) + coeff
        object.__setattr__(self, "terms", tuple(sorted(merged.items())))

    @classmethod
    def from_mapping(cls, mapping: Mapping[SpeciesId, int]) -> "Complex":
        return cls(tuple(mapping.items()))

    def __getitem__(self, sid: SpeciesId) -> int:
        for s, c in self.terms:
            if s == sid:
                return c
        return 0

    def __contains__(self, sid) -> bool:
        return any(s == sid for s, _ in self.terms)

    def __iter__(self) -> Iterator[SpeciesId]:
        return (s for s, _ in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "Complex") -> "Complex":
        return Complex(self.terms + other.terms)

    def is_empty(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(name if c == 1 else f"{c} {name}" for name, c in ((s.name, c) for s, c in self.terms))


@dataclass(frozen=True)
class ReversibleReaction:
    index: int
    reactant: Complex
    product: Complex
    forward_label: str
    backward_label: str

    @property
    def degenerate(self) -> bool:
        return self.reactant == self.product

    def species(self) -> list[SpeciesId]:
        return sorted(set(self.reactant) | set(self.product))

    def reversed(self) -> "ReversibleReaction":
        return ReversibleReaction(self.index, self.product, self.reactant,
                                  self.backward_label, self.forward_label)

    def __str__(self) -> str:
        return f"{self.reactant} <=> {self.product}"


@dataclass(frozen=True)
class ReactionNetwork:
    species: tuple[SpeciesId, ...]
    reactions: tuple[ReversibleReaction, ...]

    def __post_init__(self):
        object.__setattr__(self, "species", tuple(self.species))
        object.__setattr__(self, "reactions", tuple(self.reactions))
        if not self.reactions:
            raise ValueError("a reaction network needs at least one reaction")
        names = set()
        for i, sid in enumerate(self.species):
            if sid.index != i:
                raise ValueError(f"species {sid.name} has index {sid.index}, expected {i}")
            if sid.name in names:
                raise ValueError(f"duplicate species name {sid.name}")
            names.add(sid.name)
        known = set(self.species)
        labels: set[str] = set()
        for i, rx in enumerate(self.reactions):
            if rx.index != i:
                raise ValueError(f"reaction has index {rx.index}, expected {i}")
            for sid in rx.species():
                if sid not in known:
                    raise ValueError(f"reaction {i + 1} references unknown species {sid.name}")
            for lab in (rx.forward_label, rx.backward_label):
                if lab in labels:
                    raise ValueError(f"duplicate rate constant label {lab}")
                labels.add(lab)

    @property
    def n_species(self) -> int:
        return len(self.species)

    @property
    def n_reactions(self) -> int:
        return len(self.reactions)

    def species_named(self, name: str) -> SpeciesId:
        for sid in self.species:
            if sid.name == name:
                return sid
        raise KeyError(name)

    def nondegenerate(self) -> list[ReversibleReaction]:
        return [rx for rx in self.reactions if not rx.degenerate]

    def __str__(self) -> str:
        return format_network(self)


def rate_label(i: int, j: int) -> str:
    """Label ``k{i}{j}``; an underscore separates multi-digit indices."""
    if i < 10 and j < 10:
        return f"k{i}{j}"
    return f"k{i}_{j}"


def _default_labels(index: int) -> tuple[str, str]:
    return rate_label(index + 1, index + 2), rate_label(index + 2, index + 1)


def build_network(
    reactions: Iterable[tuple[Mapping[str, int], Mapping[str, int]]],
    labels: Sequence[tuple[str | None, str | None]] | None = None,
) -> ReactionNetwork:
    """Build a network from ``(reactant, product)`` name->coefficient maps.

    Species are ordered by first appearance (reactant before product, terms in
    mapping order).  Missing labels are filled with the per-ordinal defaults.
    """
    pairs = list(reactions)
    order: dict[str, SpeciesId] = {}

    def intern(name: str) -> SpeciesId:
        if name not in order:
            order[name] = SpeciesId(len(order), name)
        return order[name]

    complexes = []
    for lhs, rhs in pairs:
        sides = []
        for side in (lhs, rhs):
            terms = []
            for name, coeff in side.items():
                if coeff:
                    terms.append((intern(name), coeff))
            sides.append(Complex(tuple(terms)))
        complexes.append(sides)

    user = list(labels) if labels is not None else [(None, None)] * len(pairs)
    taken = {lab for pair in user for lab in pair if lab}
    out = []
    for i, ((reactant, product), (fwd, bwd)) in enumerate(zip(complexes, user)):
        dfwd, dbwd = _default_labels(i)
        if fwd is None and dfwd in taken:
            raise ValueError(f"generated label {dfwd} clashes with a user label")
        if bwd is None and dbwd in taken:
            raise ValueError(f"generated label {dbwd} clashes with a user label")
        out.append(ReversibleReaction(i, reactant, product, fwd or dfwd, bwd or dbwd))
    return ReactionNetwork(tuple(order.values()), tuple(out))


# ---------------------------------------------------------------------------
# DSL parsing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<rev><=>)
  | (?P<irr>->)
  | (?P<label>\[\s*(?P<labname>[A-Za-z][A-Za-z0-9_]*)\s*\])
  | (?P<int>\d+)
  | (?P<name>[A-Za-z][A-Za-z0-9_]*)
  | (?P<plus>\+)
    """,
    re.VERBOSE,
)


@dataclass
class _Token:
    kind: str
    text: str
    column: int


def _tokenize(line: str, lineno: int) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(line):
        m = _TOKEN_RE.match(line, pos)
        if m is None:
            raise ParseError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
        kind = m.lastgroup
        if kind == "labname":
            kind = "label"
        if kind != "ws":
            text = m.group("labname") if kind == "label" else m.group(0)
            tokens.append(_Token(kind, text, pos + 1))
        pos = m.end()
    return tokens


class _LineParser:
    def __init__(self, tokens: list[_Token], lineno: int, length: int):
        self.tokens = tokens
        self.pos = 0
        self.lineno = lineno
        self.eol_column = length + 1

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def error(self, message: str, tok: _Token | None = None) -> ParseError:
        tok = tok if tok is not None else self.peek()
        col = tok.column if tok is not None else self.eol_column
        return ParseError(message, self.lineno, col)

    def take(self, kind: str) -> _Token:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            found = "end of line" if tok is None else repr(tok.text)
            raise self.error(f"expected {kind}, found {found}", tok)
        self.pos += 1
        return tok

    def complex(self) -> list[tuple[str, int]]:
        tok = self.peek()
        if tok is None:
            raise self.error("expected a complex, found end of line")
        nxt = self.tokens[self.pos + 1] if self.pos + 1 < len(self.tokens) else None
        if tok.kind == "int" and int(tok.text) == 0 and (nxt is None or nxt.kind != "name"):
            self.pos += 1
            return []
        terms = [self.term()]
        while self.peek() is not None and self.peek().kind == "plus":
            self.pos += 1
            terms.append(self.term())
        return terms

    def term(self) -> tuple[str, int]:
        tok = self.peek()
        coeff = 1
        if tok is not None and tok.kind == "int":
            coeff = int(tok.text)
            if coeff > MAX_COEFFICIENT:
                raise self.error(f"coefficient {tok.text} exceeds 32-bit range", tok)
            self.pos += 1
        name = self.take("name")
        return name.text, coeff

    def arrow(self) -> tuple[str, str | None, str | None]:
        tok = self.peek()
        if tok is None or tok.kind not in ("rev", "irr"):
            found = "end of line" if tok is None else repr(tok.text)
            raise self.error(f"expected '<=>' or '->', found {found}", tok)
        self.pos += 1
        labels = []
        while self.peek() is not None and self.peek().kind == "label":
            labels.append(self.take("label"))
        limit = 2 if tok.kind == "rev" else 1
        if len(labels) > limit:
            raise self.error("too many rate labels on arrow", labels[limit])
        if tok.kind == "rev" and len(labels) == 1:
            raise self.error("reversible arrow needs both rate labels or none", labels[0])
        fwd = labels[0].text if labels else None
        bwd = labels[1].text if len(labels) > 1 else None
        return tok.kind, fwd, bwd


def _merge(terms: list[tuple[str, int]], lineno: int) -> dict[str, int]:
    out: dict[str, int] = {}
    for name, coeff in terms:
        if coeff == 0:
            continue
        out[name] = out.get(name, 0) + coeff
        if out[name] > MAX_COEFFICIENT:
            raise ParseError(f"summed coefficient of {name} exceeds 32-bit range", lineno)
    return out


def parse_network(text: str, assume_reversible: bool = False) -> ReactionNetwork:
    """Parse one model written in the reaction DSL.

    Duplicate species within a complex are summed and ``0 X`` terms are
    dropped.  A reaction with identical sides is kept but flagged with a
    :class:`DegenerateReactionWarning`.
    """
    if not text or not text.strip():
        raise ParseError("empty model")
    reactions: list[tuple[dict[str, int], dict[str, int]]] = []
    labels: list[tuple[str | None, str | None]] = []
    positions: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = _tokenize(line, lineno)
        if not tokens:
            continue
        p = _LineParser(tokens, lineno, len(line.rstrip()))
        left = _merge(p.complex(), lineno)
        nchain = 0
        while p.peek() is not None:
            arrow_tok = p.peek()
            kind, fwd, bwd = p.arrow()
            if kind == "irr" and not assume_reversible:
                raise ParseError("irreversible reaction; pass assume_reversible to add a free "
                                 "reverse rate constant", lineno, arrow_tok.column)
            right = _merge(p.complex(), lineno)
            reactions.append((left, right))
            labels.append((fwd, bwd))
            positions.append(lineno)
            left = right
            nchain += 1
        if nchain == 0:
            raise p.error("expected '<=>' after complex")
    if not reactions:
        raise ParseError("model contains no reactions")

    seen: dict[str, int] = {}
    for lineno, pair in zip(positions, labels):
        for lab in pair:
            if lab is None:
                continue
            if lab in seen:
                raise ParseError(f"duplicate rate label {lab}", lineno)
            seen[lab] = lineno
    try:
        net = build_network(reactions, labels)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    for rx, lineno in zip(net.reactions, positions):
        if rx.degenerate:
            warnings.warn(f"line {lineno}: reaction {rx} has identical complexes; "
                          "it contributes a zero binomial", DegenerateReactionWarning, stacklevel=2)
    return net


def format_network(net: ReactionNetwork) -> str:
    """Render a network back to DSL text, one reaction per line.

    Labels are written only where they differ from the generated defaults, so
    ``parse_network(format_network(net))`` reproduces ``net``.
    """
    lines = []
    for rx in net.reactions:
        arrow = "<=>"
        if (rx.forward_label, rx.backward_label) != _default_labels(rx.index):
            arrow = f"<=>[{rx.forward_label}][{rx.backward_label}]"
        lines.append(f"{rx.reactant} {arrow} {rx.product}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Batch loading

_HEADER_RE = re.compile(r"^===\s*(?P<name>.*?)\s*===\s*$")


@dataclass
class Batch:
    models: list[tuple[str, ReactionNetwork]] = field(default_factory=list)
    errors: list[tuple[str, str]] = field(default_factory=list)

    def __iter__(self):
        return iter(self.models)

    def __len__(self) -> int:
        return len(self.models)


def _load_model(batch: Batch, name: str, text: str, assume_reversible: bool) -> None:
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateReactionWarning)
            batch.models.append((name, parse_network(text, assume_reversible)))
    except ParseError as exc:
        batch.errors.append((name, str(exc)))


def _is_blank(text: str) -> bool:
    return all(not line.split("#", 1)[0].strip() for line in text.splitlines())


def parse_batch_text(text: str, default_name: str = "model", assume_reversible: bool = False) -> Batch:
    """Split text on ``=== name ===`` header lines and parse each model.

    Text before the first header is a model named ``default_name`` unless it
    holds only comments and blank lines.
    """
    batch = Batch()
    chunks: list[tuple[str, list[str]]] = [(default_name, [])]
    for line in text.splitlines():
        m = _HEADER_RE.match(line)
        if m:
            chunks.append((m.group("name") or f"model{len(chunks)}", []))
        else:
            chunks[-1][1].append(line)
    for i, (name, lines) in enumerate(chunks):
        body = "\n".join(lines)
        if i == 0 and _is_blank(body):
            continue
        _load_model(batch, name, body, assume_reversible)
    return batch


def parse_batch(path: str | Path, assume_reversible: bool = False) -> Batch:
    """Load a corpus: a directory of ``*.crn`` files or a single batch file.

    Per-model parse failures are collected in ``Batch.errors``; the remaining
    models still load.
    """
    path = Path(path)
    if path.is_dir():
        batch = Batch()
        for f in sorted(path.glob("*.crn")):
            _load_model(batch, f.stem, f.read_text(encoding="utf-8"), assume_reversible)
        return batch
    return parse_batch_text(path.read_text(encoding="utf-8"), path.stem, assume_reversible)
