"""Modified species-reaction graph and the edge-rewriting binomiality test.

Species vertices and (non-degenerate) reaction vertices form a bipartite
undirected graph.  Edge ``(s, r)`` carries the reactant-minus-product
coefficient of ``s`` in ``r``.  :func:`transform` visits the reaction
vertices, marks one unmarked species neighbour of each and rewrites the
edges around it; :func:`is_unconditionally_binomial_graph` then inspects the
connected components of the result.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator

from gmpy2 import mpq

from .decomposition import species_coefficient
from .network import ReactionNetwork, SpeciesId
from .verdict import Verdict

__all__ = [
    "Component",
    "ComponentSummary",
    "GraphStep",
    "GraphVerdict",
    "SRGraph",
    "create_graph",
    "graph_to_matrix",
    "is_unconditionally_binomial_graph",
    "to_dot",
    "transform",
    "transform_steps",
]


class SRGraph:
    """Bipartite graph with rational edge labels.

    Species vertices are species indices, reaction vertices are network
    reaction indices.  Adjacency is kept in both directions as dicts so that
    neighbour iteration is O(degree) and edge lookup/update/delete are O(1).
    A zero label is never stored.
    """

    def __init__(self, species: tuple[SpeciesId, ...], reactions: tuple[int, ...],
                 reaction_names: dict[int, str] | None = None):
        self.species = tuple(species)
        self.reactions = tuple(reactions)
        self.reaction_names = dict(reaction_names or {r: f"r{r + 1}" for r in self.reactions})
        self.marked = [False] * len(self.species)
        self._sp: list[dict[int, mpq]] = [{} for _ in self.species]
        self._rx: dict[int, dict[int, mpq]] = {r: {} for r in self.reactions}

    def copy(self) -> "SRGraph":
        g = SRGraph(self.species, self.reactions, self.reaction_names)
        g.marked = list(self.marked)
        g._sp = [dict(d) for d in self._sp]
        g._rx = {r: dict(d) for r, d in self._rx.items()}
        return g

    # -- edges --------------------------------------------------------------
    def has_edge(self, s: int, r: int) -> bool:
        return r in self._sp[s]

    def label(self, s: int, r: int) -> mpq:
        return self._sp[s][r]

    def add_edge(self, s: int, r: int, label) -> None:
        if r in self._sp[s]:
            raise ValueError(f"edge ({s}, {r}) already exists")
        self.set_label(s, r, label)

    def set_label(self, s: int, r: int, label) -> None:
        label = mpq(label)
        if not label:
            raise ValueError("zero-labeled edges are not stored")
        self._sp[s][r] = label
        self._rx[r][s] = label

    def remove_edge(self, s: int, r: int) -> None:
        del self._sp[s][r]
        del self._rx[r][s]

    def species_neighbors(self, r: int) -> list[int]:
        return sorted(self._rx[r])

    def reaction_neighbors(self, s: int) -> list[int]:
        return sorted(self._sp[s])

    def edges(self) -> Iterator[tuple[int, int, mpq]]:
        for s, nbrs in enumerate(self._sp):
            for r in sorted(nbrs):
                yield s, r, nbrs[r]

    @property
    def n_edges(self) -> int:
        return sum(len(d) for d in self._sp)

    def species_degree(self, s: int) -> int:
        return len(self._sp[s])

    def reaction_degree(self, r: int) -> int:
        return len(self._rx[r])


def create_graph(net: ReactionNetwork) -> SRGraph:
    """One species vertex per species, one reaction vertex per non-degenerate
    reaction, edges where the coefficient difference is nonzero; all unmarked."""
    rxs = net.nondegenerate()
    g = SRGraph(net.species, tuple(rx.index for rx in rxs))
    for rx in rxs:
        for s in rx.species():
            c = species_coefficient(rx, s)
            if c:
                g.add_edge(s.index, rx.index, c)
    return g


@dataclass(frozen=True)
class GraphStep:
    position: int
    reaction: int
    marked: int | None
    graph: SRGraph


def transform_steps(g: SRGraph) -> Iterator[GraphStep]:
    """Run the rewriting on ``g`` in place, yielding after every reaction vertex.

    Reaction vertices are visited in ascending index and the unmarked species
    neighbour with the smallest index is marked.  Reaction vertices without an
    unmarked neighbour are skipped.
    """
    sp, rx = g._sp, g._rx
    for pos, r in enumerate(g.reactions):
        r_edges = rx[r]
        r_species = sorted(r_edges)
        cs = next((s for s in r_species if not g.marked[s]), None)
        if cs is not None:
            g.marked[cs] = True
            pivot = r_edges[cs]
            # the pivot row is not modified during this step
            others = [(r2, lab, rx[r2]) for r2, lab in sp[cs].items() if r2 != r]
            for s2 in r_species:
                if s2 == cs:
                    continue
                s2_edges = sp[s2]
                mult = -s2_edges.pop(r) / pivot
                del r_edges[s2]
                for r2, lab, r2_edges in others:
                    cur = s2_edges.get(r2)
                    if cur is None:
                        cf = lab * mult
                        s2_edges[r2] = cf
                        r2_edges[s2] = cf
                    else:
                        cf = lab * mult + cur
                        if cf:
                            s2_edges[r2] = cf
                            r2_edges[s2] = cf
                        else:
                            del s2_edges[r2]
                            del r2_edges[s2]
        yield GraphStep(pos, r, cs, g)


def transform(g: SRGraph) -> SRGraph:
    """Return the fully rewritten copy of a freshly created graph."""
    out = g.copy()
    for _ in transform_steps(out):
        pass
    return out


@dataclass(frozen=True)
class Component:
    species: tuple[int, ...]
    reactions: tuple[int, ...]

    @property
    def n_species(self) -> int:
        return len(self.species)

    @property
    def n_reactions(self) -> int:
        return len(self.reactions)


@dataclass
class ComponentSummary:
    components: list[Component] = field(default_factory=list)

    def nontrivial(self) -> list[Component]:
        return [c for c in self.components if c.n_species + c.n_reactions > 1]


@dataclass(frozen=True)
class GraphVerdict:
    verdict: Verdict
    summary: ComponentSummary
    violating: list[Component]
    isolated_reactions: list[int]


def _components(g: SRGraph) -> ComponentSummary:
    seen_s = [False] * len(g.species)
    seen_r = {r: False for r in g.reactions}
    comps = []
    # species-first seeding keeps component order deterministic
    seeds = [("s", s) for s in range(len(g.species))] + [("r", r) for r in g.reactions]
    for kind, v in seeds:
        if (kind == "s" and seen_s[v]) or (kind == "r" and seen_r[v]):
            continue
        cs, cr = [], []
        queue = deque([(kind, v)])
        if kind == "s":
            seen_s[v] = True
        else:
            seen_r[v] = True
        while queue:
            k, x = queue.popleft()
            if k == "s":
                cs.append(x)
                for r in g._sp[x]:
                    if not seen_r[r]:
                        seen_r[r] = True
                        queue.append(("r", r))
            else:
                cr.append(x)
                for s in g._rx[x]:
                    if not seen_s[s]:
                        seen_s[s] = True
                        queue.append(("s", s))
        comps.append(Component(tuple(sorted(cs)), tuple(sorted(cr))))
    return ComponentSummary(comps)


def is_unconditionally_binomial_graph(g: SRGraph) -> GraphVerdict:
    """Every component with a species vertex must be a lone species vertex or
    one species joined to one reaction.  Components made only of a reaction
    vertex place no constraint on the rows and are accepted."""
    summary = _components(g)
    bad = []
    isolated = []
    for comp in summary.components:
        if comp.n_species == 0:
            isolated.extend(comp.reactions)
            continue
        if comp.n_species == 1 and comp.n_reactions <= 1:
            continue
        bad.append(comp)
    return GraphVerdict(Verdict.of(not bad), summary, bad, isolated)


def graph_to_matrix(g: SRGraph) -> list[list[mpq]]:
    """Rows = species vertices, columns = reaction vertices, entries = labels or 0."""
    col = {r: j for j, r in enumerate(g.reactions)}
    out = [[mpq(0)] * len(g.reactions) for _ in g.species]
    for s, r, lab in g.edges():
        out[s][col[r]] = lab
    return out


def to_dot(g: SRGraph, name: str = "G") -> str:
    """DOT rendering: species as circles (marked ones filled), reactions as boxes."""
    esc = name.replace("\\", "\\\\").replace('"', '\\"')
    lines = [f'graph "{esc}" {{', "  node [shape=circle];"]
    for i, sid in enumerate(g.species):
        style = ", style=filled, fillcolor=lightgrey" if g.marked[i] else ""
        lines.append(f'  s{i} [label="{sid.name}"{style}];')
    lines.append("  node [shape=box];")
    for r in g.reactions:
        lines.append(f'  r{r} [label="{g.reaction_names[r]}"];')
    for s, r, lab in g.edges():
        lines.append(f'  s{s} -- r{r} [label="{lab}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
