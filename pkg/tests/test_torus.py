"""Torus-action machinery: limit map, type classification, kernel extensions,
Jacobian ranks, tangent decomposition."""

import random

import pytest

from permvar import linalg
from permvar.errors import PreconditionError, StructuralError
from permvar.groebner import over_prime
from permvar.permanent import (
    GenericMatrixSpec,
    derivative_matrices,
    kirkup_matrix,
    permanental_ideal,
)
from permvar.ring import QQ, PolyRing, VarUniverse
from permvar.torus import (
    WeightAssignment,
    border_pattern_matrix,
    classify_type,
    generic_rank,
    is_fixed,
    jacobian_rank_at,
    kernel_extension_check,
    limit_map,
    random_probe,
    tangent_decomposition,
)

RNG = random.Random(77)
P1 = 2147483647
P2 = 1073741789


def test_weight_assignment_validation():
    WeightAssignment((3, 4), (1,))
    with pytest.raises(StructuralError):
        WeightAssignment((3, 4), ())
    with pytest.raises(StructuralError):
        WeightAssignment((3, 4), (1, 2, 3))  # not proper
    with pytest.raises(StructuralError):
        WeightAssignment((3, 4), (5,))


def test_limit_map_zeroes_weight_one_rows():
    w = WeightAssignment((3, 4), (1,))
    K = kirkup_matrix(3).as_lists()
    lm = limit_map(K, w)
    assert lm == [[0, 0, 0, 0], K[1], K[2]]
    assert limit_map(lm, w) == lm  # idempotent
    assert is_fixed(lm, w)
    assert limit_map([[0] * 4] * 3, w) == [[0] * 4] * 3


def test_limit_map_image_is_fixed_locus():
    w = WeightAssignment((4, 4), (1, 2))
    for _ in range(20):
        p = random_probe(4, 4, RNG)
        q = limit_map(p, w)
        assert is_fixed(q, w)
        if is_fixed(p, w):
            assert q == p


def test_classify_type_random_full_rank():
    # type 0 at a generic fixed point: the derived matrix has full rank
    for _ in range(20):
        A = random_probe(2, 4, RNG)
        rep = classify_type(A, "B1")
        assert rep.rank == 4 and rep.type == 0


def test_classify_type_kirkup_points():
    for k in range(3, 9):
        K = kirkup_matrix(k)
        rep = classify_type(K.weight_zero_part(), "B1")
        assert rep.rank == k
        assert rep.corank == 1
        assert rep.type == 1
    rep3 = classify_type(kirkup_matrix(3).weight_zero_part(), "B1")
    assert rep3.kernel_basis == ((1, 1, 1, -7),)


def test_classify_type_zero_column_gives_rank_2():
    # a zero column isolates one nonzero row/column pair in the derived matrix
    for _ in range(20):
        k = RNG.randint(3, 5)
        A = random_probe(k - 1, k + 1, RNG)
        j = RNG.randrange(k + 1)
        for row in A:
            row[j] = 0
        rep = classify_type(A, "B1")
        assert rep.rank == 2
        assert rep.type == k - 1


def test_type_report_json():
    rep = classify_type(kirkup_matrix(3).weight_zero_part(), "B1", seed=9)
    blob = rep.to_json()
    assert blob["rank"] == 3 and blob["type"] == 1 and blob["seed"] == 9
    assert blob["kernel_basis"] == [[1, 1, 1, -7]]


def test_kernel_extension_check_b1():
    K3 = kirkup_matrix(3)
    A_p = K3.weight_zero_part()
    assert kernel_extension_check(A_p, (1, 1, 1, -7), "B1")
    assert kernel_extension_check(A_p, (0, 0, 0, 0), "B1")
    assert kernel_extension_check(A_p, (2, 2, 2, -14), "B1")  # kernel is a line
    A = random_probe(2, 4, RNG)
    assert not kernel_extension_check(A, (1, 0, 0, 0), "B1")


def test_kernel_extension_equivalence_with_kernel():
    """The stacked maximal permanents vanish exactly for kernel vectors."""
    for k in (3, 4):
        for _ in range(10):
            A = random_probe(k - 1, k + 1, RNG)
            j = RNG.randrange(k + 1)
            for row in A:
                row[j] = 0  # force corank so the kernel is nontrivial
            B = derivative_matrices(A, "B1")
            for v in linalg.kernel_basis(B):
                assert kernel_extension_check(A, tuple(v), "B1")
            # a random non-kernel vector must fail
            for _ in range(5):
                q = [RNG.randint(-9, 9) for _ in range(k + 1)]
                in_kernel = all(
                    sum(B[i][j2] * q[j2] for j2 in range(k + 1)) == 0
                    for i in range(k + 1)
                )
                assert kernel_extension_check(A, tuple(q), "B1") == in_kernel


def test_kernel_extension_mode_l():
    A = [[1, 1, 1]]  # (k-2) x k with k = 3
    zero = (0, 0, 0)
    assert kernel_extension_check(A, (zero, zero), "L")
    assert not kernel_extension_check(A, ((1, 0, 0), (0, 1, 0)), "L")


def test_rank_never_one_sampled():
    for k in range(3, 7):
        for _ in range(200):
            A = random_probe(k - 1, k + 1, RNG)
            assert classify_type(A, "B1").rank != 1
        if k >= 4:
            for _ in range(200):
                A = random_probe(k - 2, k, RNG)
                assert classify_type(A, "L").rank != 1


def test_border_pattern_rank():
    for k in range(3, 9):
        for _ in range(30):
            a = RNG.choice([x for x in range(-50, 51) if x])
            b = RNG.choice([x for x in range(-50, 51) if x])
            assert linalg.rank(border_pattern_matrix(k, a, b)) == k


def test_generic_rank_sampling():
    assert generic_rank((2, 4), "B1", seed=123) == 4


def test_jacobian_rank_constants():
    R = PolyRing(VarUniverse.matrix(2, 2), QQ)
    assert jacobian_rank_at([R.const(3), R.const(0)], [1, 2, 3, 4]) == 0


@pytest.mark.parametrize("prime", [P1, P2])
def test_jacobian_rank_maximal_permanents(prime):
    rng = random.Random(55)
    for k in (2, 3, 4):
        gens = over_prime(permanental_ideal(GenericMatrixSpec(k, k + 1)), prime)
        pt = [rng.randrange(prime) for _ in range(k * (k + 1))]
        assert jacobian_rank_at(gens, pt) == k + 1


@pytest.mark.parametrize("prime", [P1, P2])
def test_jacobian_rank_2x5_never_full(prime):
    rng = random.Random(56)
    gens = over_prime(permanental_ideal(GenericMatrixSpec(2, 5)), prime)
    for _ in range(50):
        pt = [rng.randrange(prime) for _ in range(10)]
        assert jacobian_rank_at(gens, pt) <= 9


def _qq_gens(k, n):
    gens = permanental_ideal(GenericMatrixSpec(k, n))
    ring = gens[0].ring.with_domain(QQ)
    return [g.convert(ring) for g in gens]


def test_tangent_decomposition_kirkup():
    w = WeightAssignment((3, 4), (1,))
    gens = _qq_gens(3, 4)
    p = limit_map(kirkup_matrix(3).as_lists(), w)
    assert tangent_decomposition(p, w, gens) == (8, 1)


def test_tangent_decomposition_generic_and_zero():
    w = WeightAssignment((3, 4), (1,))
    gens = _qq_gens(3, 4)
    p = [[0] * 4] + random_probe(2, 4, RNG)
    assert tangent_decomposition(p, w, gens) == (8, 0)
    assert tangent_decomposition([[0] * 4] * 3, w, gens) == (8, 4)


def test_tangent_decomposition_two_row_mode():
    w = WeightAssignment((4, 4), (1, 2))
    gens = permanental_ideal(GenericMatrixSpec(4, 4, h=3))
    ring = gens[0].ring.with_domain(QQ)
    gens = [g.convert(ring) for g in gens]
    p = [[0] * 4, [0] * 4] + random_probe(2, 4, RNG)
    t0, t1 = tangent_decomposition(p, w, gens)
    assert t0 == 8
    L = derivative_matrices(p[2:], "L")
    assert t1 == 2 * (len(L) - linalg.rank(L))


def test_tangent_decomposition_requires_fixed_point():
    w = WeightAssignment((3, 4), (1,))
    gens = _qq_gens(3, 4)
    with pytest.raises(PreconditionError):
        tangent_decomposition(kirkup_matrix(3).as_lists(), w, gens)
