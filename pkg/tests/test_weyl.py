from fractions import Fraction

import numpy as np
import pytest

from quditphase.cyclotomic import CycArray
from quditphase.errors import NotNormalized, ParseError
from quditphase.phasespace import symplectic_form
from quditphase.weyl import (
    basis_state,
    boost,
    characteristic_function,
    characteristic_function_cyc,
    check_normalized,
    compose_labels,
    inverse_label,
    irreducibility_sum,
    random_state,
    shift,
    state_from_json,
    state_to_json,
    weyl_apply,
    weyl_cyc,
    weyl_data,
    weyl_expand,
    weyl_operator,
    weyl_trace_cyc,
)
from quditphase.zmod import System, chi, points, position_index


def test_shift_and_boost():
    s = System(3, 1)
    X = shift(s, (1,))
    Z = boost(s, (1,))
    e0 = basis_state(s, (0,))
    assert np.allclose(X @ e0, basis_state(s, (1,)))
    assert np.allclose(X @ X @ X, np.eye(3), atol=1e-14)
    w = np.exp(2j * np.pi / 3)
    assert np.allclose(np.diag(Z), [1, w, w * w], atol=1e-14)
    # commutation z(p) x(q) = chi(pq) x(q) z(p)
    assert np.allclose(Z @ X, w * (X @ Z), atol=1e-14)


def test_weyl_entries_single_site():
    # w(p, q)|y> = chi(2^{-1} p q + p y)|y+q>
    for d in (3, 5, 9):
        s = System(d, 1)
        half = s.half
        for p in range(d):
            for q in range(d):
                W = weyl_operator(s, (p, q))
                for y in range(d):
                    expect = chi(half * p * q + p * y, d).value
                    assert abs(W[(y + q) % d, y] - expect) < 1e-14


def test_weyl_tensor_structure():
    # the 2-particle Weyl operator is the tensor product of its sites,
    # with site 1 the most significant index
    rng = np.random.default_rng(8)
    for d in (3, 5):
        s2 = System(d, 2)
        s1 = System(d, 1)
        for _ in range(10):
            p1, p2, q1, q2 = rng.integers(0, d, size=4)
            W = weyl_operator(s2, (p1, p2, q1, q2))
            K = np.kron(weyl_operator(s1, (p1, q1)), weyl_operator(s1, (p2, q2)))
            assert np.allclose(W, K, atol=1e-13)


def test_weyl_composition_symbolic():
    # w(v1) w(v2) = chi(2^{-1}[v1, v2]) w(v1+v2), checked on exact matrices
    for d, n in ((3, 1), (5, 1)):
        s = System(d, n)
        for v1 in points(s):
            for v2 in points(s):
                lhs = weyl_cyc(s, v1).matmul(weyl_cyc(s, v2))
                v = tuple((a + b) % d for a, b in zip(v1, v2))
                t = s.half * symplectic_form(v1, v2, d)
                rhs = weyl_cyc(s, v, t)
                assert lhs.eq(rhs)


def test_weyl_composition_random_large():
    rng = np.random.default_rng(17)
    for d, n in ((9, 1), (7, 1), (9, 2), (5, 2)):
        s = System(d, n)
        for _ in range(60):
            v1 = tuple(rng.integers(0, d, size=2 * n))
            v2 = tuple(rng.integers(0, d, size=2 * n))
            lhs = weyl_cyc(s, v1).matmul(weyl_cyc(s, v2))
            v, t = compose_labels(s, (v1, 0), (v2, 0))
            assert lhs.eq(weyl_cyc(s, v, t))


def test_label_algebra():
    s = System(5, 1)
    v, t = compose_labels(s, ((1, 0), 0), ((0, 1), 0))
    assert v == (1, 1) and t == s.half
    for lab in (((2, 3), 1), ((4, 0), 2)):
        inv_lab = inverse_label(s, lab)
        v, t = compose_labels(s, lab, inv_lab)
        assert v == (0, 0) and t == 0


def test_weyl_unitary_and_inverse():
    rng = np.random.default_rng(23)
    for d, n in ((3, 1), (5, 1), (9, 1), (3, 2)):
        s = System(d, n)
        for _ in range(5):
            v = tuple(rng.integers(0, d, size=2 * n))
            W = weyl_operator(s, v)
            assert np.allclose(W @ W.conj().T, np.eye(s.dim), atol=1e-13)
            minus = tuple(-x % d for x in v)
            assert np.allclose(W.conj().T, weyl_operator(s, minus), atol=1e-13)


def test_weyl_trace():
    # tr w(v, t) = chi(t) d^n delta_{v,0}
    for d, n in ((3, 1), (5, 1), (3, 2)):
        s = System(d, n)
        for v in points(s):
            for t in range(d):
                tr = weyl_trace_cyc(s, v, t)
                if any(v):
                    assert tr.is_zero()
                else:
                    assert tr.eq(CycArray.root(d, t).scale(s.dim))


def test_weyl_apply_matches_matrix():
    rng = np.random.default_rng(31)
    for d, n in ((3, 1), (7, 1), (9, 1), (3, 2), (5, 2)):
        s = System(d, n)
        psi = random_state(s, rng)
        for _ in range(10):
            v = tuple(rng.integers(0, d, size=2 * n))
            t = int(rng.integers(0, d))
            out = weyl_apply(s, v, psi, t)
            ref = np.exp(2j * np.pi * t / d) * weyl_operator(s, v) @ psi
            assert np.max(np.abs(out - ref)) < 1e-13


def test_irreducibility_sum():
    for d, n in ((3, 1), (5, 1), (3, 2), (5, 2)):
        assert irreducibility_sum(System(d, n)) == Fraction(1)


def test_characteristic_function_of_weyl():
    # Xi of w(u) itself is the indicator of u
    s = System(3, 1)
    for i, u in enumerate(points(s)):
        xi = characteristic_function(s, weyl_operator(s, u))
        expect = np.zeros(9)
        expect[i] = 1.0
        assert np.max(np.abs(xi - expect)) < 1e-13


def test_characteristic_function_exact_matches_float():
    rng = np.random.default_rng(37)
    for d, n in ((3, 1), (9, 1), (3, 2)):
        s = System(d, n)
        # a random integer cyclotomic matrix, compared along both routes
        coeffs = rng.integers(-3, 4, size=(s.dim, s.dim, d))
        M = CycArray(d, coeffs, den=2)
        xi_exact = characteristic_function_cyc(s, M)
        xi_float = characteristic_function(s, M.to_complex())
        assert np.max(np.abs(xi_exact.to_complex() - xi_float)) < 1e-11


def test_weyl_expand_roundtrip():
    rng = np.random.default_rng(41)
    s = System(5, 1)
    A = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    xi = characteristic_function(s, A)
    assert np.max(np.abs(weyl_expand(s, xi) - A)) < 1e-12


def test_random_state_normalized_and_seeded():
    s = System(7, 1)
    psi = random_state(s, np.random.default_rng(5))
    check_normalized(psi)
    psi2 = random_state(s, np.random.default_rng(5))
    assert np.array_equal(psi, psi2)
    with pytest.raises(NotNormalized):
        check_normalized(psi * 1.001)


def test_state_json_roundtrip():
    s = System(3, 2)
    psi = random_state(s, np.random.default_rng(11))
    data = state_to_json(s, psi)
    s2, psi2 = state_from_json(data)
    assert s2 == s
    assert np.array_equal(psi, psi2)
    with pytest.raises(ParseError):
        state_from_json({"d": 3, "n": 1, "amplitudes": [[1, 0]]})
    with pytest.raises(ParseError):
        state_from_json({"d": 3, "amplitudes": []})


def test_position_ordering_in_amplitudes():
    # amplitude index follows lexicographic position order
    s = System(3, 2)
    psi = basis_state(s, (1, 2))
    assert psi[position_index(s, (1, 2))] == 1
    assert position_index(s, (1, 2)) == 1 * 3 + 2
