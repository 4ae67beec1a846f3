"""Tests for tensor pairs, the operator dictionary, and their residuals."""

import random
from fractions import Fraction

import pytest

from rbsinfty.graded import (
    GradedSpace,
    MatrixAlgebra,
    MultiMap,
    TensorElem,
    raise_indices,
    tensor_product_multiply,
)
from rbsinfty.residuals import (
    HomotopyRBS,
    check_classical_rbs,
    dga_residual_R,
    dga_residual_S,
)
from rbsinfty.sampling import random_multimap, random_tensor
from rbsinfty.yang_baxter import (
    F_inverse,
    F_map,
    InfinityYBPair,
    YBPair,
    check_classical_ybp,
    check_infinity_ybp,
    chi_inverse,
    chi_map,
    equivalence_identity_1,
    equivalence_identity_2,
    equivalence_identity_3,
    equivalence_identity_4,
    inner_derivation,
    rbs_to_ybp,
    ybp_to_rbs,
)

ONE = Fraction(1)


def _ungraded_m2():
    return MatrixAlgebra(GradedSpace([("v1", 0), ("v2", 0)]))


def _graded_m2():
    return MatrixAlgebra(GradedSpace([("v1", 0), ("v2", 1)]))


def _unit_tensor(algebra, order):
    import itertools

    table = {}
    for combo in itertools.product(algebra.unit.items(), repeat=order):
        names = tuple(n for n, _ in combo)
        coeff = ONE
        for _, c in combo:
            coeff *= c
        table[names] = coeff
    return TensorElem(algebra, order, table)


# ---------------------------------------------------------------------------
# the tensor-to-operator dictionary
# ---------------------------------------------------------------------------


def test_f_map_of_unit_tensor_is_identity():
    M = _ungraded_m2()
    assert F_map(_unit_tensor(M, 2)) == MultiMap.identity(M.space)


def test_f_map_matrix_unit_sandwich():
    M = _ungraded_m2()
    t = TensorElem(M, 2, {("e1^1", "e1^1"): 1})
    f = F_map(t)
    assert f.evaluate(("e1^1",)) == {"e1^1": ONE}
    assert f.evaluate(("e1^2",)) == {}
    assert f.evaluate(("e2^1",)) == {}


def test_f_map_rejects_order_one():
    M = _ungraded_m2()
    with pytest.raises(ValueError):
        F_map(TensorElem(M, 1, {("e1^1",): 1}))


def test_f_map_koszul_sign():
    # with t = a (x) b, the sign on input x is (-1)^{|x||b|}
    M = _graded_m2()
    t = TensorElem(M, 2, {("e2^1", "e2^1"): 1})
    f = F_map(t)
    assert f.degree == 2
    # e2^1 e1^2 e2^1 = e2^1 with |x| = -1 crossing |b| = 1
    assert f.evaluate(("e1^2",)) == {"e2^1": -ONE}
    assert f.evaluate(("e1^1",)) == {}


def test_f_map_order_three_sign():
    # t = a (x) b (x) c: sign exponent is |x1|(|b|+|c|) + |x2||c|
    M = _graded_m2()
    t = TensorElem(M, 3, {("e2^1", "e2^1", "e2^1"): 1})
    f = F_map(t)
    # inputs (e1^2, e1^2): e2^1 e1^2 e2^1 e1^2 e2^1 = e2^1; exponent
    # (-1)(1 + 1) + (-1)(1) = -3, odd
    assert f.evaluate(("e1^2", "e1^2")) == {"e2^1": -ONE}
    assert f.degree == 3


def test_f_inverse_round_trips_random_maps():
    M = _graded_m2()
    rng = random.Random(3)
    for arity in (1, 2, 3):
        for _ in range(4):
            f = random_multimap(
                rng, M.space, M.space, arity, rng.choice([-1, 0, 1]), density=0.6
            )
            assert F_map(F_inverse(f, M)) == f


def test_f_inverse_round_trips_random_tensors():
    M = _graded_m2()
    rng = random.Random(4)
    for order in (2, 3, 4):
        for _ in range(4):
            t = random_tensor(rng, M, order, degree=order - 2, density=0.5)
            assert F_inverse(F_map(t), M) == t


def test_f_inverse_of_identity_round_trips():
    M = _ungraded_m2()
    identity = MultiMap.identity(M.space)
    assert F_map(F_inverse(identity, M)) == identity


def test_f_inverse_of_zero_map_is_zero():
    M = _ungraded_m2()
    assert F_inverse(MultiMap.zero(M.space, M.space, 2, 0), M).is_zero()


def test_f_inverse_requires_matrix_algebra():
    from rbsinfty.graded import BasedAlgebra

    space = GradedSpace([("a", 0)])
    algebra = BasedAlgebra(space, {("a", "a"): {"a": 1}}, {"a": 1})
    f = MultiMap(space, space, 1, 0, {("a",): {"a": 1}})
    with pytest.raises(ValueError):
        F_inverse(f, algebra)


# ---------------------------------------------------------------------------
# classical pairs
# ---------------------------------------------------------------------------


def test_classical_pair_validation():
    M = _ungraded_m2()
    other = _graded_m2()
    r = TensorElem(M, 2, {("e1^2", "e1^2"): 1})
    with pytest.raises(ValueError):
        YBPair(r, TensorElem(other, 2, {}))
    with pytest.raises(ValueError):
        YBPair(r, TensorElem(M, 3, {}))


def test_classical_ybp_zero_pair():
    M = _ungraded_m2()
    pair = YBPair(TensorElem.zero(M, 2), TensorElem.zero(M, 2))
    res_r, res_s = check_classical_ybp(pair)
    assert res_r.is_zero() and res_s.is_zero()


def test_classical_ybp_nilpotent_pair():
    # r = s = a (x) a with a^2 = 0: every term carries an a^2 in some slot
    M = _ungraded_m2()
    a_tensor_a = TensorElem(M, 2, {("e1^2", "e1^2"): 1})
    res_r, res_s = check_classical_ybp(YBPair(a_tensor_a, a_tensor_a))
    assert res_r.is_zero() and res_s.is_zero()


def test_classical_ybp_generic_pair_fails():
    M = _ungraded_m2()
    rng = random.Random(9)
    pair = YBPair(
        random_tensor(rng, M, 2, density=0.7), random_tensor(rng, M, 2, density=0.7)
    )
    res_r, res_s = check_classical_ybp(pair)
    assert not (res_r.is_zero() and res_s.is_zero())


def test_ybp_residual_first_equation_oracle():
    # recompute r13 r12 - r12 r23 + s23 r13 by hand for a one-term pair
    M = _ungraded_m2()
    r = TensorElem(M, 2, {("e1^2", "e2^1"): 1})
    s = TensorElem(M, 2, {("e2^2", "e1^1"): 1})
    mul = tensor_product_multiply
    expected = (
        mul(raise_indices(r, (1, 3), 3), raise_indices(r, (1, 2), 3))
        - mul(raise_indices(r, (1, 2), 3), raise_indices(r, (2, 3), 3))
        + mul(raise_indices(s, (2, 3), 3), raise_indices(r, (1, 3), 3))
    )
    res_r, _ = check_classical_ybp(YBPair(r, s))
    assert res_r == expected
    assert not res_r.is_zero()


def test_conversion_zero_pair():
    M = _ungraded_m2()
    R, S = ybp_to_rbs(YBPair(TensorElem.zero(M, 2), TensorElem.zero(M, 2)))
    assert R.is_zero() and S.is_zero()


def test_nilpotent_pair_gives_rota_baxter_system():
    M = _ungraded_m2()
    a_tensor_a = TensorElem(M, 2, {("e1^2", "e1^2"): 1})
    R, S = ybp_to_rbs(YBPair(a_tensor_a, a_tensor_a))
    res_r, res_s = check_classical_rbs(M, R, S)
    assert res_r.is_zero() and res_s.is_zero()
    # all 16 basis pairs explicitly
    for a in M.space.names:
        for b in M.space.names:
            assert res_r.evaluate((a, b)) == {}
            assert res_s.evaluate((a, b)) == {}


def test_operator_round_trip_on_random_pairs():
    M = _ungraded_m2()
    rng = random.Random(21)
    for _ in range(10):
        R = random_multimap(rng, M.space, M.space, 1, 0, density=0.7)
        S = random_multimap(rng, M.space, M.space, 1, 0, density=0.7)
        pair = rbs_to_ybp(R, S, M)
        R2, S2 = ybp_to_rbs(pair)
        assert R2 == R and S2 == S


def test_tensor_round_trip_on_random_pairs():
    M = _ungraded_m2()
    rng = random.Random(22)
    for _ in range(10):
        pair = YBPair(
            random_tensor(rng, M, 2, density=0.6), random_tensor(rng, M, 2, density=0.6)
        )
        R, S = ybp_to_rbs(pair)
        back = rbs_to_ybp(R, S, M)
        assert back.r == pair.r and back.s == pair.s


@pytest.mark.parametrize("seed", range(12))
def test_classical_bijection_preserves_residual_vanishing(seed):
    M = _ungraded_m2()
    rng = random.Random(seed)
    if seed % 3 == 0:
        # salt the sample with pairs that do satisfy the equations
        a_tensor_a = TensorElem(M, 2, {("e1^2", "e1^2"): Fraction(seed + 1)})
        pair = YBPair(a_tensor_a, a_tensor_a if seed % 2 else TensorElem.zero(M, 2))
    else:
        pair = YBPair(
            random_tensor(rng, M, 2, density=0.5),
            random_tensor(rng, M, 2, density=0.5),
        )
    ybp_res = check_classical_ybp(pair)
    rbs_res = check_classical_rbs(M, *ybp_to_rbs(pair))
    ybp_ok = ybp_res[0].is_zero() and ybp_res[1].is_zero()
    rbs_ok = rbs_res[0].is_zero() and rbs_res[1].is_zero()
    assert ybp_ok == rbs_ok


def test_ybpair_json_round_trip():
    M = _ungraded_m2()
    pair = YBPair(
        TensorElem(M, 2, {("e1^2", "e2^1"): Fraction(1, 3)}),
        TensorElem(M, 2, {("e2^2", "e1^1"): -2}),
    )
    back = YBPair.from_json(M, pair.to_json())
    assert back.r == pair.r and back.s == pair.s


# ---------------------------------------------------------------------------
# homotopy pairs
# ---------------------------------------------------------------------------


def _graded_m3():
    return MatrixAlgebra(GradedSpace([("v1", 0), ("v2", 1), ("v3", 2)]))


def _random_pair(seed, truncation=3, algebra=None):
    M = algebra or _graded_m2()
    rng = random.Random(seed)
    d = random_tensor(rng, M, 1, degree=-1, density=0.9)
    families = {}
    for name in ("r", "s"):
        families[name] = {1: d}
        for order in range(2, truncation + 1):
            families[name][order] = random_tensor(
                rng, M, order, degree=order - 2, density=0.5
            )
    return InfinityYBPair(M, r=families["r"], s=families["s"], truncation=truncation)


def test_infinity_pair_validation():
    M = _graded_m2()
    d = TensorElem(M, 1, {("e1^2",): 1})
    other = TensorElem(M, 1, {("e1^2",): 2})
    with pytest.raises(ValueError):
        InfinityYBPair(M, r={1: d}, s={1: other})
    with pytest.raises(ValueError):
        InfinityYBPair(M, r={2: d})  # order mismatch
    wrong_degree = TensorElem(M, 2, {("e2^1", "e2^1"): 1})
    with pytest.raises(ValueError):
        InfinityYBPair(M, r={2: wrong_degree})
    pair = InfinityYBPair(M, r={1: d}, s={1: d})
    assert pair.truncation == 1
    assert pair.d() == d


def test_infinity_residual_index_zero_is_d_squared():
    M = _graded_m3()
    d = TensorElem(M, 1, {("e1^2",): 1, ("e2^3",): 1})
    pair = InfinityYBPair(M, r={1: d}, s={1: d})
    res_r, res_s = check_infinity_ybp(pair, 0)
    expected = tensor_product_multiply(d, d)
    assert res_r == expected and res_s == expected
    assert res_r.table == {("e1^3",): ONE}


def test_infinity_residual_index_zero_nilpotent():
    M = _graded_m2()
    d = TensorElem(M, 1, {("e1^2",): 1})
    pair = InfinityYBPair(M, r={1: d}, s={1: d})
    res_r, res_s = check_infinity_ybp(pair, 0)
    assert res_r.is_zero() and res_s.is_zero()


def test_infinity_residual_index_one_is_commutator_with_d():
    pair = _random_pair(31, truncation=2)
    d, r2, s2 = pair.d(), pair.r_at(2), pair.s_at(2)
    mul = tensor_product_multiply
    for tensor, residual in zip((r2, s2), check_infinity_ybp(pair, 1)):
        expected = TensorElem.zero(pair.algebra, 2)
        for k in (1, 2):
            dk = raise_indices(d, (k,), 2)
            expected = expected + mul(dk, tensor) - mul(tensor, dk)
        assert residual == expected


def test_infinity_residual_index_two_degenerates_to_classical():
    # r3 = s3 = 0 and d = 0: the residuals are the classical left sides
    M = _ungraded_m2()
    rng = random.Random(17)
    r2 = random_tensor(rng, M, 2, density=0.7)
    s2 = random_tensor(rng, M, 2, density=0.7)
    pair = InfinityYBPair(M, r={2: r2}, s={2: s2}, truncation=3)
    classical = check_classical_ybp(YBPair(r2, s2))
    homotopy = check_infinity_ybp(pair, 2)
    assert homotopy[0] == classical[0]
    assert homotopy[1] == classical[1]


def test_infinity_residual_truncation_guard():
    M = _graded_m2()
    d = TensorElem(M, 1, {("e1^2",): 1})
    pair = InfinityYBPair(M, r={1: d}, s={1: d})
    with pytest.raises(ValueError):
        check_infinity_ybp(pair, 1)
    with pytest.raises(ValueError):
        check_infinity_ybp(pair, -1)


def test_infinity_pair_json_round_trip():
    pair = _random_pair(5)
    M = pair.algebra
    back = InfinityYBPair.from_json(M, pair.to_json())
    assert back.truncation == pair.truncation
    assert back.r == pair.r and back.s == pair.s


# ---------------------------------------------------------------------------
# the four term-family identities
# ---------------------------------------------------------------------------


def test_inner_derivation_on_basis():
    M = _graded_m2()
    d = TensorElem(M, 1, {("e1^2",): 1})
    m1 = inner_derivation(d, M)
    assert m1.degree == -1
    # m1(e2^1) = -d e2^1 + (-1)^{1} e2^1 d = -e1^1 - e2^2
    assert m1.evaluate(("e2^1",)) == {"e1^1": -ONE, "e2^2": -ONE}
    # m1(e1^1) = -d e1^1 + e1^1 d = -0 + e1^2
    assert m1.evaluate(("e1^1",)) == {"e1^2": ONE}
    # m1(e2^2) = -d e2^2 + e2^2 d = -e1^2
    assert m1.evaluate(("e2^2",)) == {"e1^2": -ONE}
    assert m1.evaluate(("e1^2",)) == {}


def test_inner_derivation_squares_to_commutator_with_d_squared():
    M = _graded_m3()
    d = TensorElem(M, 1, {("e1^2",): 1, ("e2^3",): 1})
    m1 = inner_derivation(d, M)
    from rbsinfty.graded import compose_tensor

    square = compose_tensor(m1, [m1])
    # [d^2, -] since d has odd degree: m1(m1(x)) = d^2 x - x d^2
    d2 = tensor_product_multiply(d, d)
    d2_coeffs = {f[0]: c for f, c in d2.table.items()}
    for x in M.space.names:
        left = M.multiply(d2_coeffs, {x: ONE})
        right = M.multiply({x: ONE}, d2_coeffs)
        expected = {
            k: left.get(k, Fraction(0)) - right.get(k, Fraction(0))
            for k in set(left) | set(right)
        }
        expected = {k: v for k, v in expected.items() if v}
        assert square.evaluate((x,)) == expected


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("family", ["r", "s"])
def test_equivalence_identities_hold(seed, family):
    pair = _random_pair(seed)
    for n in (1, 2, 3):
        for identity in (
            equivalence_identity_1,
            equivalence_identity_2,
            equivalence_identity_3,
            equivalence_identity_4,
        ):
            map_side, tensor_side = identity(pair, n, family)
            assert F_map(tensor_side) == map_side, (seed, family, n, identity.__name__)


def test_identity_pieces_assemble_the_residual():
    from rbsinfty.yang_baxter import _piece_1, _piece_2, _piece_3, _piece_4

    pair = _random_pair(40)
    for n in (1, 2):
        for family, residual in zip(("r", "s"), check_infinity_ybp(pair, n)):
            combined = (
                -_piece_1(pair, n, family)
                - _piece_2(pair, n, family)
                + _piece_3(pair, n, family)
                + _piece_4(pair, n, family)
            )
            assert residual == combined


# ---------------------------------------------------------------------------
# the correspondence with differential graded structures
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("seed", range(6))
def test_residuals_correspond_under_the_dictionary(seed):
    pair = _random_pair(seed, truncation=3)
    structure = chi_map(pair)
    for n in (1, 2):
        res_r, res_s = check_infinity_ybp(pair, n)
        assert F_map(res_r) == -1 * dga_residual_R(structure, n)
        assert F_map(res_s) == -1 * dga_residual_S(structure, n)


def test_chi_map_structure_shape():
    pair = _random_pair(2, truncation=3)
    structure = chi_map(pair)
    assert structure.truncation == 2
    assert structure.m_at(2) == pair.algebra.product_map()

    def stored_or_zero(f, arity, degree):
        space = pair.algebra.space
        return MultiMap.zero(space, space, arity, degree) if f is None else f

    assert stored_or_zero(structure.m_at(1), 1, -1) == inner_derivation(
        pair.d(), pair.algebra
    )
    for n in (1, 2):
        r_tensor = pair.r_at(n + 1)
        if r_tensor is not None:
            assert stored_or_zero(structure.r_at(n), n, n - 1) == F_map(r_tensor)
        s_tensor = pair.s_at(n + 1)
        if s_tensor is not None:
            assert stored_or_zero(structure.s_at(n), n, n - 1) == F_map(s_tensor)


def test_chi_round_trip():
    pair = _random_pair(13, truncation=3)
    structure = chi_map(pair)
    back = chi_inverse(structure, pair.d(), pair.algebra)
    assert back.truncation == pair.truncation
    assert back.r == pair.r
    assert back.s == pair.s


def test_chi_inverse_validates_d():
    pair = _random_pair(14, truncation=2)
    structure = chi_map(pair)
    wrong = pair.d() + TensorElem(pair.algebra, 1, {("e1^2",): 17})
    if inner_derivation(wrong, pair.algebra) == structure.m_at(1):
        pytest.skip("perturbation happened to be central")
    with pytest.raises(ValueError):
        chi_inverse(structure, wrong, pair.algebra)


def test_chi_zero_pair_gives_zero_operators():
    M = _graded_m2()
    pair = InfinityYBPair(M, truncation=3)
    structure = chi_map(pair)
    assert structure.m_at(1) is None  # -[0,-] = 0 is dropped
    assert structure.m_at(2) == M.product_map()
    assert structure.r_at(1) is None and structure.s_at(1) is None
    for n in (1, 2):
        assert dga_residual_R(structure, n).is_zero()
        res_r, res_s = check_infinity_ybp(pair, n)
        assert res_r.is_zero() and res_s.is_zero()
