"""Tests for finite field arithmetic and the single-particle relabeling."""

import numpy as np
import pytest
from fractions import Fraction

from quditphase.errors import BudgetExceeded, DomainMismatch, SingularGram
from quditphase.galois import (
    GaloisField,
    dual_basis,
    field_lines,
    field_phase_point,
    field_symplectic_form,
    field_vs_module_stabilizer_gap,
    field_weyl,
    iota,
    iota_inverse,
    multiparticle_ratio,
    verify_factorization,
)
from quditphase.cyclotomic import CycArray
from quditphase.phasespace import closure, is_maximal_isotropic, symplectic_form
from quditphase.stabilizer import stabilizer_projector_cyc, trivial_character
from quditphase.wigner import phase_point_operator_cyc
from quditphase.zmod import System, points


def test_field_construction_and_defaults():
    F9 = GaloisField(3, 2)
    assert F9.poly == (1, 0, 1)
    assert F9.order == 9
    F27 = GaloisField(3, 3)
    assert F27.poly == (1, 2, 0, 1)
    assert F27.order == 27
    F25 = GaloisField(5, 2)
    assert F25.poly == (2, 0, 1)
    with pytest.raises(ValueError):
        GaloisField(2, 2)
    with pytest.raises(ValueError):
        GaloisField(9, 1)
    with pytest.raises(ValueError):
        GaloisField(3, 2, poly=(2, 0, 1))  # t^2 - 1 factors over F_3
    with pytest.raises(ValueError):
        GaloisField(3, 2, poly=(1, 0, 2))  # not monic
    # degree without a table entry triggers a search for an irreducible
    F81 = GaloisField(3, 4)
    assert F81.order == 81
    assert len(F81.poly) == 5 and F81.poly[-1] == 1


def test_field_arithmetic_f9():
    F = GaloisField(3, 2)
    t = F.gen
    assert F.mul(t, t) == F.element((2,))  # t^2 = -1
    assert F.mul(F.element((1, 1)), F.element((1, 2))) == F.element((2,))
    elems = F.elements()
    assert len(elems) == 9 and len(set(elems)) == 9
    # commutative ring identities, exhaustively
    for a in elems:
        assert F.mul(a, F.one) == a
        assert F.add(a, F.neg(a)) == F.zero
        for b in elems:
            assert F.mul(a, b) == F.mul(b, a)
            assert F.add(a, b) == F.add(b, a)
    # t squares to -1 so it has multiplicative order 4; 1 + t has order 8
    assert F.power(t, 4) == F.one
    assert F.power(t, 2) != F.one
    u = F.element((1, 1))
    assert F.power(u, 8) == F.one
    assert F.power(u, 4) == F.element((2,))


def test_frobenius_is_a_field_automorphism():
    for F in (GaloisField(3, 2), GaloisField(3, 3)):
        elems = F.elements()
        fixed = [a for a in elems if F.frobenius(a) == a]
        assert len(fixed) == F.p
        for a in elems[:9]:
            for b in elems[:9]:
                assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))
                assert F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b))


def test_trace_values_and_linearity():
    F = GaloisField(3, 2)
    assert F.trace(F.gen) == 0
    assert F.trace(F.one) == 2  # n copies of the base element
    for a in F.elements():
        assert F.trace(F.frobenius(a)) == F.trace(a)
        for b in F.elements():
            assert F.trace(F.add(a, b)) == (F.trace(a) + F.trace(b)) % 3
    F27 = GaloisField(3, 3)
    assert F27.trace(F27.one) == 0  # 3 copies of 1 vanish mod 3
    assert F27.trace(F27.gen) == 0


def test_dual_basis_pairing_and_involution():
    for F in (GaloisField(3, 2), GaloisField(3, 3), GaloisField(5, 2)):
        B = F.primal_basis()
        D = dual_basis(F)
        for i, bi in enumerate(D):
            for j, bj in enumerate(B):
                assert F.trace(F.mul(bi, bj)) == (1 if i == j else 0)
        assert dual_basis(F, D) == B
    F = GaloisField(3, 2)
    alt = (F.element((1, 1)), F.element((0, 1)))
    D = dual_basis(F, alt)
    for i, bi in enumerate(D):
        for j, bj in enumerate(alt):
            assert F.trace(F.mul(bi, bj)) == (1 if i == j else 0)
    with pytest.raises(SingularGram):
        dual_basis(F, (F.one, F.element((2,))))
    with pytest.raises(DomainMismatch):
        dual_basis(F, (F.one,))


def test_iota_examples_and_bijection():
    F = GaloisField(3, 2)
    assert iota(F, F.zero, F.zero) == (0, 0, 0, 0)
    assert iota(F, F.zero, F.one) == (0, 0, 1, 0)
    assert iota(F, F.zero, F.gen) == (0, 0, 0, 1)
    images = set()
    for pe in F.elements():
        for qe in F.elements():
            v = iota(F, pe, qe)
            images.add(v)
            assert iota_inverse(F, v) == (pe, qe)
    assert len(images) == 81
    with pytest.raises(DomainMismatch):
        iota_inverse(F, (0, 0, 0))


def test_iota_preserves_the_symplectic_form():
    F = GaloisField(3, 2)
    elems = F.elements()
    rng = np.random.default_rng(2)
    for _ in range(60):
        u = (elems[rng.integers(9)], elems[rng.integers(9)])
        v = (elems[rng.integers(9)], elems[rng.integers(9)])
        lhs = field_symplectic_form(F, u, v) % 3
        rhs = symplectic_form(iota(F, *u), iota(F, *v), 3)
        assert lhs == rhs


def test_character_factorizes_over_coordinates():
    # Tr(pq) equals the dot product of dual and primal coordinate vectors
    F = GaloisField(3, 2)
    for pe in F.elements():
        for qe in F.elements():
            coords = iota(F, pe, qe)
            dot = sum(coords[i] * coords[2 + i] for i in range(2)) % 3
            assert F.trace(F.mul(pe, qe)) % 3 == dot


def test_field_weyl_matches_relabeled_tensor_operator():
    rep = verify_factorization(3, 2)
    assert rep.labels == 81
    assert rep.weyl_exact == 81
    assert rep.phase_point_exact == 81
    assert rep.complete


def test_field_weyl_is_a_kron_of_single_qudit_operators():
    from quditphase.weyl import weyl_cyc

    F = GaloisField(3, 2)
    s1 = System(3, 1)
    for pe, qe in (((1, 2), (0, 1)), ((2, 0), (1, 1))):
        v = iota(F, pe, qe)
        W = field_weyl(F, pe, qe)
        K = weyl_cyc(s1, (v[0], v[2])).kron(weyl_cyc(s1, (v[1], v[3])))
        assert W.eq(K)


def test_factorization_trivial_for_prime_fields():
    rep3 = verify_factorization(3, 1)
    assert rep3.labels == 9 and rep3.complete
    rep5 = verify_factorization(5, 1)
    assert rep5.labels == 25 and rep5.complete


def test_factorization_is_basis_independent():
    F = GaloisField(3, 2)
    alt = (F.element((1, 1)), F.element((0, 1)))
    rep = verify_factorization(3, 2, basis=alt, phase_points=False)
    assert rep.weyl_exact == rep.labels == 81
    assert rep.phase_point_exact is None
    assert rep.complete


def test_factorization_budget():
    with pytest.raises(BudgetExceeded):
        verify_factorization(3, 5)


def test_field_phase_point_matches_module_operator():
    F = GaloisField(3, 2)
    s = System(3, 2)
    for label in ((F.zero, F.zero), (F.gen, F.one)):
        A = field_phase_point(F, *label)
        assert A.eq(phase_point_operator_cyc(s, iota(F, *label)))


def test_field_lines_relabel_to_isotropic_subspaces():
    F = GaloisField(3, 2)
    s = System(3, 2)
    lines = field_lines(F)
    assert len(lines) == 10
    images = set()
    for line in lines:
        assert len(line) == 9
        vecs = [iota(F, pe, qe) for pe, qe in line]
        M = closure(vecs, 3, 4)
        assert sorted(M.elements) == sorted(vecs)
        assert is_maximal_isotropic(M, s)
        images.add(M)
    assert len(images) == 10


def test_line_stabilizer_states_coincide():
    # the field-line projector and the relabeled module projector agree
    # symbolically, so the stabilizer states are literally the same
    F = GaloisField(3, 2)
    s = System(3, 2)
    for line in field_lines(F):
        acc = CycArray.zeros(3, (9, 9))
        for pe, qe in line:
            acc = acc + field_weyl(F, pe, qe)
        P_field = acc.scale(Fraction(1, 9))
        M = closure([iota(F, pe, qe) for pe, qe in line], 3, 4)
        P_module = stabilizer_projector_cyc(s, M, trivial_character(M))
        assert P_field.eq(P_module)


def test_stabilizer_gap_for_two_qutrits():
    gap = field_vs_module_stabilizer_gap(3, 2)
    assert gap.field_line_count == 10
    assert gap.module_subspace_count == 40
    assert gap.field_state_count == 90
    assert gap.module_state_count == 360
    assert gap.ratio == Fraction(4)
    assert gap.ratio == multiparticle_ratio(2, 3)
    assert gap.scalar_closed_count == 10
    assert len(set(gap.line_images)) == 10
    assert gap.witness is not None
    assert gap.witness_vector in gap.witness.elements
    assert gap.witness_image not in gap.witness.elements
    # the scalar image really is multiplication by the field generator
    F = GaloisField(3, 2)
    pe, qe = iota_inverse(F, gap.witness_vector)
    t = F.gen
    assert iota(F, F.mul(t, pe), F.mul(t, qe)) == gap.witness_image


def test_bell_type_subspace_fails_scalar_closure():
    # an entangling maximal isotropic subspace that no field line produces
    gap = field_vs_module_stabilizer_gap(3, 2)
    M = closure([(0, 0, 1, 1), (1, 2, 0, 0)], 3, 4)
    assert is_maximal_isotropic(M, System(3, 2))
    assert M not in set(gap.line_images)


def test_gap_is_trivial_for_prime_dimension():
    gap = field_vs_module_stabilizer_gap(3, 1)
    assert gap.field_line_count == 4
    assert gap.module_subspace_count == 4
    assert gap.ratio == 1
    assert gap.scalar_closed_count == 4
    assert gap.witness is None


def test_gap_budget():
    with pytest.raises(BudgetExceeded):
        field_vs_module_stabilizer_gap(5, 2)


def test_multiparticle_ratio_values_and_bound():
    assert multiparticle_ratio(1, 3) == 1
    assert multiparticle_ratio(2, 3) == 4
    assert multiparticle_ratio(3, 3) == 40
    assert multiparticle_ratio(2, 5) == 6
    for n, p in ((1, 3), (2, 3), (3, 3), (4, 3), (2, 5), (3, 5), (2, 7)):
        assert multiparticle_ratio(n, p) >= p ** ((n * n - n) // 2)
