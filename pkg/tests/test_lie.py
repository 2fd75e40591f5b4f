import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import psi_sympy
from rrkit.constants import SIGMA
from rrkit.hochschild import NotACycle, TensorChain, boundary_solve, chain_parse, epsilon_eval, hoch_b
from rrkit.homological import complex_validate, homology_ranks
from rrkit.lie import (CapExceeded, CEChain, InvalidLieAlgebra, LieAlgebraData, NotARepresentation, abelian,
                       ce_betti, ce_complex, ce_differential, cubic_trace_cochain, gl, koszul_build, kp_psi,
                       lie_algebra, load_structure_constants, lqt_beta, psi_on_hochschild_cycle, sl2,
                       trace_cochain)
from rrkit.sampling import rand_chain, rand_cochain, rand_op, rand_partner
from rrkit.weyl import RankMismatch, op_comm, op_mul
from rrkit.weyl import op_parse as P

sigma = chain_parse(SIGMA)
seeds = st.integers(0, 2 ** 32)


def op_pair(seed, n=2):
    """Random operators of a common rank; the last one carries terms dual to the product of the others."""
    rng = random.Random(seed)
    r = rng.randint(1, 2)
    ops = [rand_op(rng, order=3, z=(-4, 4), rank=r) for _ in range(n - 1)]
    prod = ops[0] if n == 2 else op_mul(ops[0], ops[1])
    return ops + [rand_partner(rng, prod)]


# ------------------------------------------------------------- CE


@pytest.mark.parametrize("name,betti", [
    ("gl1", [1, 1]),
    ("gl2", [1, 1, 0, 1, 1]),
    ("sl2", [1, 0, 0, 1]),
    ("ab2", [1, 2, 1]),
])
def test_ce_betti(name, betti):
    assert ce_betti(lie_algebra(name)).sequence() == betti


def test_trace_is_closed_on_gl2():
    g = gl(2)
    assert trace_cochain(g)
    assert ce_differential(trace_cochain(g), 1, g) == {}


def test_cubic_trace_is_closed_on_sl2():
    g = sl2()
    gamma = cubic_trace_cochain(g)
    assert gamma
    assert ce_differential(gamma, 3, g) == {}


def test_abelian_differential_vanishes():
    g = abelian(3)
    rng = random.Random(4)
    for k in range(3):
        assert ce_differential(rand_cochain(rng, g, k), k, g) == {}


@pytest.mark.parametrize("name", ["gl2", "sl2", "gl3"])
@pytest.mark.parametrize("adjoint", [False, True])
def test_ce_differential_squares_to_zero(name, adjoint):
    g = lie_algebra(name)
    module = g.adjoint() if adjoint else None
    mdim = g.dim if adjoint else 1
    rng = random.Random(hash((name, adjoint)) % 1000)
    for k in range(min(g.dim, 4) - 1):
        for _ in range(3):
            l = rand_cochain(rng, g, k, mdim=mdim, density=0.4)
            assert ce_differential(ce_differential(l, k, g, module), k + 1, g, module) == {}


def test_non_representation_rejected():
    g = sl2()
    bad = [[[Fraction(int(i == j)) for j in range(2)] for i in range(2)] for _ in range(3)]
    with pytest.raises(NotARepresentation):
        ce_differential({((0,), 0): 1}, 1, g, bad)
    with pytest.raises(NotARepresentation):
        ce_complex(g, bad[:2])


def test_adjoint_module_complex_validates():
    g = sl2()
    c = ce_complex(g, g.adjoint())
    assert complex_validate(c)
    # Whitehead: H(sl2, adjoint) vanishes
    assert homology_ranks(c).total() == 0


def test_caps():
    with pytest.raises(CapExceeded):
        ce_complex(gl(4))
    with pytest.raises(CapExceeded):
        koszul_build(gl(2), 7)


def test_structure_constant_table():
    g = load_structure_constants("dim 3\n2 1 2 2   # [h,e] = 2e\n3 1 3 -2\n1 2 3 1\n")
    assert ce_betti(g).sequence() == [1, 0, 0, 1]
    with pytest.raises(InvalidLieAlgebra):
        load_structure_constants("2 1 2 1\n2 2 1 1\n")
    with pytest.raises(InvalidLieAlgebra, match="Jacobi"):
        load_structure_constants("1 2 3 1\n2 3 1 1\n1 1 2 1\n")
    with pytest.raises(ValueError, match="line 1"):
        load_structure_constants("1 2\n")


def test_jacobi_validated_at_construction():
    g = gl(2)
    consts = dict(g.consts)
    consts[(1, 0, 1)] = Fraction(2)
    consts.pop((1, 1, 0))
    with pytest.raises(InvalidLieAlgebra):
        LieAlgebraData(g.labels, consts)


# ------------------------------------------------------------- Koszul


@pytest.mark.parametrize("g,bound,betti", [
    (abelian(2), 3, [1, 0, 0]),
    (gl(2), 3, [1, 0, 0, 0]),
    (sl2(), 3, [1, 0, 0, 0]),
    (gl(2), 0, [1]),
])
def test_koszul_exactness(g, bound, betti):
    c = koszul_build(g, bound)
    assert complex_validate(c)
    rep = homology_ranks(c)
    assert rep.sequence() == betti
    assert rep.unstable_degrees() == []


# ------------------------------------------------------------- Psi


def test_psi_examples():
    assert kp_psi(P("z^2"), P("z^-1 d")) == 1
    assert kp_psi(P("-2*z"), P("d")) == 0
    assert kp_psi(P("1"), P("1")) == 0


def test_psi_rank_mismatch():
    with pytest.raises(RankMismatch):
        kp_psi(P("z"), P("z E(1,2)"))


def test_psi_on_cycles():
    assert psi_on_hochschild_cycle(sigma) == 1
    assert psi_on_hochschild_cycle(sigma * 3) == 3
    assert psi_on_hochschild_cycle(TensorChain.zero(1)) == 0
    with pytest.raises(NotACycle):
        psi_on_hochschild_cycle(TensorChain.tensor("z", "d"))


def test_psi_and_epsilon_are_opposite_on_sigma():
    assert psi_on_hochschild_cycle(sigma) == -epsilon_eval(sigma) == 1


@given(seeds)
def test_psi_antisymmetry(seed):
    a, b = op_pair(seed)
    assert kp_psi(a, b) + kp_psi(b, a) == 0


@given(seeds)
def test_psi_cocycle(seed):
    a, b, c = op_pair(seed, 3)
    assert kp_psi(op_comm(a, b), c) + kp_psi(op_comm(b, c), a) + kp_psi(op_comm(c, a), b) == 0


def test_law_samples_are_not_all_trivial():
    assert sum(1 for s in range(300) if kp_psi(*op_pair(s)) != 0) >= 60
    hits = 0
    for s in range(300):
        a, b, c = op_pair(s, 3)
        hits += kp_psi(op_comm(a, b), c) != 0
    assert hits >= 50


@settings(max_examples=25)
@given(seeds)
def test_psi_matches_sympy_residue(seed):
    a, b = op_pair(seed)
    assert kp_psi(a, b) == psi_sympy(a, b)


@given(seeds)
def test_psi_invariant_under_boundaries(seed):
    rng = random.Random(seed)
    x = rand_chain(rng, 2, order=3, z=(-4, 4))
    assert psi_on_hochschild_cycle(sigma + hoch_b(x)) == 1


@given(seeds)
def test_psi_vanishes_on_matrix_boundaries(seed):
    x = rand_chain(random.Random(seed), 2, order=1, z=(-2, 2), rank=2)
    assert psi_on_hochschild_cycle(hoch_b(x)) == 0


# ------------------------------------------------------------- beta


def test_beta_rank_one():
    x, y = P("z^3 d"), P("z^-1")
    assert lqt_beta(CEChain.wedge(x, y)) == (TensorChain.tensor(x, y) - TensorChain.tensor(y, x)) * Fraction(1, 2)


def test_beta_entry_trace():
    beta = lqt_beta(CEChain.wedge(P("z E(1,2)"), P("d E(2,1)")))
    assert beta == (TensorChain.tensor("z", "d") - TensorChain.tensor("d", "z")) * Fraction(1, 2)


def test_beta_drops_traceless_pairs():
    assert not lqt_beta(CEChain.wedge(P("z E(1,2)"), P("d E(1,2)")))


def test_beta_of_lie_chain_is_homologous_to_sigma():
    lie = CEChain.wedge(P("z^2"), P("z^-1 d")) - CEChain.wedge(P("z"), P("d")) * 2
    beta = lqt_beta(lie)
    assert not hoch_b(beta)
    diff = beta - sigma
    x = boundary_solve(diff, (-2, 2), 2)
    assert x is not None and hoch_b(x) == diff
    assert psi_on_hochschild_cycle(beta) == 1


def test_ce_chain_normalization():
    a, b = P("z"), P("d")
    assert CEChain.wedge(a, b) == -CEChain.wedge(b, a)
    assert not CEChain.wedge(a, a)
    with pytest.raises(ValueError):
        lqt_beta(CEChain.wedge(a))
