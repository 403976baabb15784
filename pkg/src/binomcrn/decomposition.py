"""Associated binomials and the sum-of-binomials form of the steady-state polynomials.

For a reversible reaction ``C_i <=> C_j`` with monomials ``m_i``, ``m_j`` and
rate constants ``k_ij``, ``k_ji`` the associated binomial is
``b = -k_ij*m_i + k_ji*m_j``.  Each steady-state polynomial is then
``p_s = sum_rx c(rx, s) * b(rx)`` with ``c = reactant coeff - product coeff``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .network import ReactionNetwork, ReversibleReaction, SpeciesId
from .polynomial import SymbolicPolynomial, complex_monomial

__all__ = [
    "BinomialEntry",
    "associated_binomial",
    "binomial_table",
    "format_odes",
    "mass_action_rhs",
    "species_coefficient",
    "steady_state_polynomials",
    "verify_decomposition",
]


def associated_binomial(rx: ReversibleReaction) -> SymbolicPolynomial:
    """Return ``-k_fwd*m_reactant + k_bwd*m_product``; zero for a degenerate reaction."""
    if rx.degenerate:
        return SymbolicPolynomial()
    fwd = SymbolicPolynomial.rate(rx.forward_label) * complex_monomial(rx.reactant)
    bwd = SymbolicPolynomial.rate(rx.backward_label) * complex_monomial(rx.product)
    return bwd - fwd


def species_coefficient(rx: ReversibleReaction, s: SpeciesId) -> int:
    """Reactant minus product stoichiometric coefficient of ``s`` in ``rx``.

    With this sign ``dx_s/dt`` gains ``c * b`` from the reaction.
    """
    return rx.reactant.get(s, 0) - rx.product.get(s, 0)


@dataclass(frozen=True)
class BinomialEntry:
    binomial: SymbolicPolynomial
    coeffs: dict[SpeciesId, int]


def binomial_table(net: ReactionNetwork) -> dict[int, BinomialEntry]:
    """Binomial and nonzero coefficients per non-degenerate reaction index."""
    table = {}
    for rx in net.nondegenerate():
        coeffs = {}
        for s in rx.species():
            c = species_coefficient(rx, s)
            if c:
                coeffs[s] = c
        table[rx.index] = BinomialEntry(associated_binomial(rx), coeffs)
    return table


def steady_state_polynomials(net: ReactionNetwork) -> list[SymbolicPolynomial]:
    polys = [SymbolicPolynomial() for _ in net.species]
    for entry in binomial_table(net).values():
        for s, c in entry.coeffs.items():
            polys[s.index] = polys[s.index] + c * entry.binomial
    return polys


def mass_action_rhs(net: ReactionNetwork) -> list[SymbolicPolynomial]:
    """Mass-action ODE right-hand sides built straight from the kinetics.

    Each reversible reaction is split into two irreversible ones; every
    irreversible reaction ``R -> P`` with rate ``k*m_R`` adds
    ``(P_s - R_s) * k * m_R`` to species ``s``.  Degenerate reactions are
    included; their net change is zero.
    """
    rhs = [SymbolicPolynomial() for _ in net.species]
    for rx in net.reactions:
        for src, dst, label in ((rx.reactant, rx.product, rx.forward_label),
                                (rx.product, rx.reactant, rx.backward_label)):
            rate = SymbolicPolynomial.rate(label) * complex_monomial(src)
            for s in set(src) | set(dst):
                change = dst.get(s, 0) - src.get(s, 0)
                if change:
                    rhs[s.index] = rhs[s.index] + change * rate
    return rhs


def verify_decomposition(net: ReactionNetwork) -> bool:
    return steady_state_polynomials(net) == mass_action_rhs(net)


def format_odes(net: ReactionNetwork) -> list[str]:
    return [f"d{s.name}/dt = {p}" for s, p in zip(net.species, steady_state_polynomials(net))]
