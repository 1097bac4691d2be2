import random

import pytest

from lpkit.array import InvalidArrayError, ParameterArray, compute_a, compute_a_star
from lpkit.fields import GF, RATIONAL, FieldElement, FieldMismatchError
from lpkit.matrices import (
    ExactMatrix,
    MatrixError,
    build_split_form,
    conjugate,
    eigenbasis_ordered,
    inverse,
    kernel,
    oracle_a,
    oracle_matrices,
    solve,
    tridiagonal_profile,
)

from oracles import valid_samples

Q = RATIONAL
D1 = ParameterArray.build(Q, [0, 1], [0, 1], [1], [2])
D2 = ParameterArray.build(Q, [0, 1, 3], [0, 1, 3], [-1, -4], [2, 2])
ETA5 = ParameterArray.build(Q, [-2, 3, 7, 12], [25, 14, 10, 11], [77, 36, -7], [-77, -36, 7])


def M(rows, field=Q):
    return ExactMatrix.from_values(field, rows)


def grid(m):
    return m.to_json()


def test_split_form_d1():
    A, As = build_split_form(D1)
    assert grid(A) == [["0", "0"], ["1", "1"]]
    assert grid(As) == [["0", "1"], ["0", "1"]]


def test_split_form_d0_and_d2():
    A, As = build_split_form(ParameterArray.build(Q, [4], [9], [], []))
    assert grid(A) == [["4"]] and grid(As) == [["9"]]
    A, As = build_split_form(D2)
    assert grid(A) == [["0", "0", "0"], ["1", "1", "0"], ["0", "1", "3"]]
    assert grid(As) == [["0", "-1", "0"], ["0", "1", "-4"], ["0", "0", "3"]]


def test_split_form_rejects_invalid():
    with pytest.raises(InvalidArrayError):
        build_split_form(ParameterArray.build(Q, [0, 1], [0, 1], [1], [1]))


def test_eigenbasis_examples():
    A, As = build_split_form(D1)
    assert grid(eigenbasis_ordered(As, D1.theta_star)) == [["1", "1"], ["0", "1"]]
    assert grid(eigenbasis_ordered(A, D1.theta)) == [["1", "0"], ["-1", "1"]]
    diag = M([[2, 0], [0, 5]])
    assert eigenbasis_ordered(diag, [Q(2), Q(5)]) == ExactMatrix.identity(Q, 2)


def test_eigenbasis_ordering_follows_input():
    diag = M([[2, 0], [0, 5]])
    assert grid(eigenbasis_ordered(diag, [Q(5), Q(2)])) == [["0", "1"], ["1", "0"]]


def test_eigenbasis_errors():
    with pytest.raises(MatrixError):
        eigenbasis_ordered(ExactMatrix.identity(Q, 2), [Q(1), Q(2)])  # 2-dim eigenspace for 1
    with pytest.raises(MatrixError):
        eigenbasis_ordered(M([[2, 0], [0, 5]]), [Q(2), Q(2)])
    with pytest.raises(MatrixError):
        eigenbasis_ordered(M([[2, 0], [0, 5]]), [Q(2), Q(7)])


def test_conjugate_examples():
    A, As = build_split_form(D1)
    I = ExactMatrix.identity(Q, 2)
    assert conjugate(A, I) == A
    T = conjugate(A, eigenbasis_ordered(As, D1.theta_star))
    # by hand: P*^-1 = [[1,-1],[0,1]], A P* = [[0,0],[1,2]]
    assert grid(T) == [["-1", "-2"], ["1", "2"]]
    D = conjugate(A, eigenbasis_ordered(A, D1.theta))
    assert grid(D) == [["0", "0"], ["0", "1"]]


def test_conjugate_singular():
    with pytest.raises(MatrixError):
        conjugate(M([[1, 2], [3, 4]]), M([[1, 1], [1, 1]]))


def test_tridiagonal_profile_examples():
    p = tridiagonal_profile(ExactMatrix.identity(Q, 3))
    assert [str(x) for x in p.diag] == ["1", "1", "1"]
    assert [str(x) for x in p.sub] == ["0", "0"] and not p.irreducible
    p = tridiagonal_profile(M([[-1, -2], [1, 2]]))
    assert [str(x) for x in p.diag] == ["-1", "2"] and p.irreducible
    p = tridiagonal_profile(M([[0, 1], [1, 0]]))
    assert p.irreducible and [str(x) for x in p.sub] == ["1"]
    with pytest.raises(MatrixError):
        tridiagonal_profile(M([[1, 0, 1], [0, 1, 0], [0, 0, 1]]))


@pytest.mark.parametrize("pa,a", [(D1, ["-1", "2"]), (ETA5, ["5"] * 4), (D2, ["1", "2", "1"])])
def test_oracle_examples(pa, a):
    got, got_star = oracle_a(pa)
    assert [str(x) for x in got] == a
    assert got_star == compute_a_star(pa)


def test_oracle_result_json_keys():
    obj = oracle_matrices(D1).to_json()
    assert list(obj) == ["A", "A_star", "P_star", "T", "P", "T_star"]
    assert obj["T"] == [["-1", "-2"], ["1", "2"]]


def test_oracle_matches_formulas_on_samples():
    for s in valid_samples(seed=11, samples=4, d_max=8):
        assert oracle_a(s.array) == (compute_a(s.array), compute_a_star(s.array))


def test_debug_normalization_recheck(monkeypatch):
    monkeypatch.setenv("LPKIT_DEBUG_ORACLE", "1")
    for s in valid_samples(seed=5, samples=2):
        assert oracle_a(s.array) == (compute_a(s.array), compute_a_star(s.array))


def test_last_nonzero_normalization():
    A, As = build_split_form(D1)
    P = eigenbasis_ordered(As, D1.theta_star, last_nonzero=True)
    assert grid(P) == [["1", "1"], ["0", "1"]]
    P = eigenbasis_ordered(A, D1.theta, last_nonzero=True)
    assert grid(P) == [["-1", "0"], ["1", "1"]]


def _random_matrix(rng, field, n):
    def el():
        if field.kind == "rational":
            return field(rng.randint(-4, 4))
        return FieldElement(field, rng.randrange(field.size))

    return ExactMatrix.from_values(field, [[el() for _ in range(n)] for _ in range(n)])


@pytest.mark.parametrize("field", [RATIONAL, GF(7), GF(8)])
def test_conjugate_round_trip_random(field):
    rng = random.Random(f"conj:{field}")
    done = 0
    while done < 1000:
        n = rng.randint(1, 4)
        P = _random_matrix(rng, field, n)
        try:
            Pinv = inverse(P)
        except MatrixError:
            continue
        X = _random_matrix(rng, field, n)
        assert P @ Pinv == ExactMatrix.identity(field, n)
        assert conjugate(conjugate(X, P), Pinv) == X
        done += 1


def test_kernel_and_solve():
    m = M([[1, 2], [2, 4]])
    ker = kernel(m)
    assert len(ker) == 1 and [str(x) for x in ker[0]] == ["-2", "1"]
    X = solve(M([[2, 0], [0, 4]]), M([[1, 0], [0, 1]]))
    assert grid(X) == [["1/2", "0"], ["0", "1/4"]]


def test_mixed_field_matrices():
    with pytest.raises(FieldMismatchError):
        ExactMatrix.identity(Q, 2) @ ExactMatrix.identity(GF(5), 2)
