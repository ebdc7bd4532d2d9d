import pytest
from hypothesis import given, strategies as st

from floquet_pxp import SizeError, InvalidStateError, enumerate_basis, fibonacci, index_of
from floquet_pxp.basis import MAX_SITES

from conftest import brute_force_patterns


def site_string(pattern, L):
    return "".join("1" if pattern >> b & 1 else "0" for b in range(L))


@pytest.mark.parametrize("L", range(1, 21))
def test_size_matches_brute_force_and_fibonacci(L):
    basis = enumerate_basis(L)
    assert basis.states.tolist() == brute_force_patterns(L)
    assert basis.size == fibonacci(L + 2)


def test_small_examples():
    assert enumerate_basis(1).size == 2
    b4 = enumerate_basis(4)
    assert b4.size == 8
    assert {site_string(s, 4) for s in b4.states} == {
        "0000", "1000", "0100", "0010", "1010", "1001", "0001", "0101"
    }
    assert enumerate_basis(12).size == 377


def fib_recursive(n):
    a, b = 1, 1
    for _ in range(n - 2):
        a, b = b, a + b
    return 1 if n <= 2 else b


@pytest.mark.parametrize("n, expected", [(1, 1), (2, 1), (3, 2), (14, 377)])
def test_fibonacci_values(n, expected):
    assert fibonacci(n) == expected == fib_recursive(n)


def test_fibonacci_range():
    with pytest.raises(SizeError):
        fibonacci(0)
    with pytest.raises(SizeError):
        fibonacci(93)
    assert fibonacci(92) == 7540113804746346429


@pytest.mark.parametrize("L", [0, -3, MAX_SITES + 1])
def test_enumerate_rejects_out_of_range(L):
    with pytest.raises(SizeError):
        enumerate_basis(L)


def test_index_of_examples():
    b4 = enumerate_basis(4)
    assert index_of(b4, 0b0000) == 0
    assert index_of(b4, 5) == 4
    with pytest.raises(InvalidStateError):
        index_of(b4, 0b0011)
    with pytest.raises(InvalidStateError):
        index_of(b4, 1 << 4)
    assert b4.lookup(0b0011) == -1


@given(st.integers(min_value=1, max_value=16), st.data())
def test_index_inverts_states(L, data):
    basis = enumerate_basis(L)
    k = data.draw(st.integers(min_value=0, max_value=basis.size - 1))
    assert index_of(basis, int(basis.states[k])) == k


@pytest.mark.parametrize("L", [5, 11, 18])
def test_invariants_exhaustive(L):
    basis = enumerate_basis(L)
    s = basis.states
    assert all(int(x) & (int(x) >> 1) == 0 for x in s)
    assert all(a < b for a, b in zip(s[:-1], s[1:]))
    assert all(basis.index_map[int(x)] == k for k, x in enumerate(s))
    assert len(basis.index_map) == basis.size


def test_dump_format():
    lines = enumerate_basis(3).dump().splitlines()
    assert lines[0] == "0,000"
    assert lines[1] == "1,100"
    assert len(lines) == 5
