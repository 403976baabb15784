from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from binomcrn.decomposition import (associated_binomial, binomial_table, format_odes,
                                    mass_action_rhs, species_coefficient,
                                    steady_state_polynomials, verify_decomposition)
from binomcrn.harness import RandomNetworkSpec, generate_random
from binomcrn.network import parse_network
from binomcrn.polynomial import SymbolicPolynomial as P
from conftest import CHAIN4, CYCLE3, CHAIN3, parse_quiet
from oracles import poly_to_sympy, sympy_odes


def term(coeff, rates, species):
    return P.monomial(coeff, rates=[(r, 1) for r in rates], species=species)


@pytest.fixture
def chain3_vars(chain3):
    A, B, C, D = chain3.species
    return chain3, A, B, C, D


def test_associated_binomials_chain3(chain3_vars):
    net, A, B, C, D = chain3_vars
    b12 = term(-1, ["k12"], [(A, 1), (B, 1)]) + term(1, ["k21"], [(C, 1)])
    b23 = term(-1, ["k23"], [(C, 1)]) + term(1, ["k32"], [(A, 1), (D, 2)])
    assert associated_binomial(net.reactions[0]) == b12
    assert associated_binomial(net.reactions[1]) == b23
    assert str(b12) == "-k12*x_A*x_B + k21*x_C"


def test_degenerate_binomial_is_zero():
    net = parse_quiet("A <=> A")
    assert associated_binomial(net.reactions[0]).is_zero()
    assert binomial_table(net) == {}
    assert all(p.is_zero() for p in steady_state_polynomials(net))


def test_species_coefficients(chain3_vars):
    net, A, B, C, D = chain3_vars
    assert species_coefficient(net.reactions[0], A) == 1
    assert species_coefficient(net.reactions[1], D) == -2
    assert species_coefficient(net.reactions[0], D) == 0


def test_chain3_odes_term_for_term(chain3_vars):
    # the mass-action ODEs of the 3-complex chain, written out by hand
    net, A, B, C, D = chain3_vars
    x1x2, x3, x1x42 = [(A, 1), (B, 1)], [(C, 1)], [(A, 1), (D, 2)]
    expected = [
        term(-1, ["k12"], x1x2) + term(1, ["k21"], x3) + term(1, ["k23"], x3) + term(-1, ["k32"], x1x42),
        term(-1, ["k12"], x1x2) + term(1, ["k21"], x3),
        term(1, ["k12"], x1x2) + term(-1, ["k21"], x3) + term(-1, ["k23"], x3) + term(1, ["k32"], x1x42),
        term(2, ["k23"], x3) + term(-2, ["k32"], x1x42),
    ]
    got = steady_state_polynomials(net)
    assert got == expected
    assert [len(p) for p in got] == [4, 2, 4, 2]


def test_table_coeffs_only_nonzero(chain3):
    table = binomial_table(chain3)
    assert {s.name: c for s, c in table[0].coeffs.items()} == {"A": 1, "B": 1, "C": -1}
    assert {s.name: c for s, c in table[1].coeffs.items()} == {"A": -1, "C": 1, "D": -2}
    for entry in table.values():
        assert len(entry.binomial) == 2


@pytest.mark.parametrize("text", [CHAIN3, CHAIN4, CYCLE3, "0 <=> A <=> 2 A", "A + B <=> A + C"])
def test_verify_decomposition_fixtures(text):
    assert verify_decomposition(parse_network(text))


@pytest.mark.parametrize("text", [CHAIN3, CYCLE3, "2 A + B <=>[ka][kb] 3 C <=> 0"])
def test_against_sympy_oracle(text):
    net = parse_network(text)
    reactions = [({s.name: c for s, c in rx.reactant.terms}, {s.name: c for s, c in rx.product.terms})
                 for rx in net.reactions]
    labels = [(rx.forward_label, rx.backward_label) for rx in net.reactions]
    oracle = sympy_odes(reactions, labels)
    for s, p in zip(net.species, steady_state_polynomials(net)):
        assert poly_to_sympy(p) == oracle[s.name]


def test_verify_decomposition_random_corpus():
    for seed in range(1000):
        assert verify_decomposition(generate_random(RandomNetworkSpec(seed)))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_reversal_invariance(seed):
    net = generate_random(RandomNetworkSpec(seed))
    for rx in net.reactions:
        rev = rx.reversed()
        assert associated_binomial(rev) == -associated_binomial(rx)
        for s in net.species:
            c, crev = species_coefficient(rx, s), species_coefficient(rev, s)
            assert crev == -c
            assert crev * associated_binomial(rev) == c * associated_binomial(rx)


def test_sum_of_polynomials_matches_mass_action(cycle3):
    total = sum(steady_state_polynomials(cycle3), P())
    assert total == sum(mass_action_rhs(cycle3), P())


def test_format_odes(chain3):
    lines = format_odes(chain3)
    assert lines[3] == "dD/dt = -2*k32*x_A*x_D^2 + 2*k23*x_C"
    assert lines[1] == "dB/dt = -k12*x_A*x_B + k21*x_C"


# polynomial arithmetic ------------------------------------------------------

def test_polynomial_arithmetic(chain3):
    A = chain3.species[0]
    x = P.concentration(A)
    k = P.rate("k1")
    assert (x + k) * (x - k) == x * x - k * k
    assert x - x == P() and (x - x).is_zero()
    assert str(P()) == "0"
    assert 2 * x == x + x
    assert x * Fraction(1, 2) + x * Fraction(1, 2) == x
    assert str(Fraction(-3, 2) * k * x * x) == "-3/2*k1*x_A^2"
    assert P.constant(5) == 5
    assert str(P.constant(-1) + x) == "x_A - 1"
    assert hash(x + k) == hash(k + x)
