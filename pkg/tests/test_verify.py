from fractions import Fraction
from itertools import combinations, permutations

import numpy as np
import pytest

from dmorse import SimplicialComplex
from dmorse.constructions import (
    build_sigma,
    build_two_optima,
    cone,
    dunce_hat,
    simplex,
    simplex_boundary,
)
from dmorse.verify import (
    BettiVector,
    SizeLimitExceeded,
    betti_numbers,
    check_morse_consistency,
    exhaustive_collapsible,
    exhaustive_nonevasive,
    smith_normal_form,
)

def _torus7() -> SimplicialComplex:
    """Seven-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    facets = []
    for i in range(7):
        facets.append(tuple(sorted((i + k) % 7 + 1 for k in (0, 1, 3))))
        facets.append(tuple(sorted((i + k) % 7 + 1 for k in (0, 2, 3))))
    return SimplicialComplex.from_facets(facets)


TORUS = _torus7()


def _rank_fraction(mat) -> int:
    """Naive exact row reduction, the oracle for rank computations."""
    m = [[Fraction(x) for x in row] for row in mat]
    rows, cols = len(m), len(m[0]) if mat else 0
    rank = 0
    for j in range(cols):
        piv = next((i for i in range(rank, rows) if m[i][j]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        lead = m[rank]
        for i in range(rows):
            if i != rank and m[i][j]:
                f = m[i][j] / lead[j]
                m[i] = [a - f * b for a, b in zip(m[i], lead)]
        rank += 1
    return rank


def _det(m) -> int:
    n = len(m)
    total = 0
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):  # parity by counting inversions
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = 1
        for i in range(n):
            term *= m[i][perm[i]]
        total += sign * term
    return total


def _determinant_divisors(mat):
    """gcd of all k x k minors, for each k up to the rank."""
    from math import gcd
    rows, cols = len(mat), len(mat[0])
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in combinations(range(rows), k):
            for ci in combinations(range(cols), k):
                minor = [[mat[i][j] for j in ci] for i in ri]
                g = gcd(g, _det(minor))
        if g == 0:
            break
        out.append(g)
    return out


def test_betti_vector_helpers():
    b = BettiVector((1, 2, 1), ((), (), ()))
    assert b.alternating_sum == 0
    assert b.total == 4
    assert "b_1=2" in str(b)


def test_spheres_and_balls():
    for d in (1, 2, 3):
        S = simplex_boundary(d + 1)
        b = betti_numbers(S)
        assert b.ranks == (1,) + (0,) * (d - 1) + (1,)
        assert all(t == () for t in b.torsion)
        assert betti_numbers(simplex(d)).ranks == (1,) + (0,) * d


def test_torus_and_projective_plane(rp2):
    assert betti_numbers(TORUS).ranks == (1, 2, 1)
    b = betti_numbers(rp2)
    assert b.ranks == (1, 0, 0)
    assert b.torsion == ((), (2,), ())
    assert betti_numbers(rp2, prime=2).ranks == (1, 1, 1)
    assert betti_numbers(rp2, prime=3).ranks == (1, 0, 0)


def test_disconnected_components():
    K = SimplicialComplex.from_facets([(1, 2, 3), (5, 6)])
    assert betti_numbers(K).ranks == (2, 0, 0)


def test_alternating_sum_is_euler(random_complex):
    rng = np.random.default_rng(13)
    zoo = [dunce_hat(), TORUS, build_sigma(2), simplex(4)]
    zoo += [random_complex(rng, 7, 2, 10) for _ in range(15)]
    for K in zoo:
        b = betti_numbers(K)
        assert b.alternating_sum == K.euler_characteristic


def test_prime_ranks_match_integer_ranks_without_torsion(random_complex):
    rng = np.random.default_rng(29)
    for _ in range(15):
        K = random_complex(rng, 7, 2, 10)
        b = betti_numbers(K)
        if all(t == () for t in b.torsion):
            assert betti_numbers(K, prime=1009).ranks == b.ranks


def test_size_limit_guard(two_optima):
    with pytest.raises(SizeLimitExceeded):
        betti_numbers(two_optima, size_limit=100)
    # field mode handles the same complex
    assert betti_numbers(two_optima, size_limit=100, prime=2).ranks == (1, 0, 0, 0)


def test_smith_normal_form_known():
    assert smith_normal_form([[6, 0, 0], [0, 10, 0], [0, 0, 15]]) == [1, 30, 30]
    assert smith_normal_form([[0, 0], [0, 0]]) == []
    assert smith_normal_form([[2, 4], [4, 8]]) == [2]
    divs = smith_normal_form([[2, 0], [0, 3]])
    assert divs == [1, 6]


def test_smith_normal_form_divisibility_chain():
    rng = np.random.default_rng(17)
    for _ in range(30):
        mat = rng.integers(-5, 6, size=(rng.integers(1, 7), rng.integers(1, 7)))
        divs = smith_normal_form(mat.tolist())
        assert all(a > 0 for a in divs)
        for a, b in zip(divs, divs[1:]):
            assert b % a == 0


def test_smith_rank_against_fraction_gauss():
    rng = np.random.default_rng(23)
    for _ in range(20):
        shape = (int(rng.integers(1, 31)), int(rng.integers(1, 31)))
        mat = rng.integers(-4, 5, size=shape).tolist()
        assert len(smith_normal_form(mat)) == _rank_fraction(mat)


def test_smith_against_determinant_divisors():
    rng = np.random.default_rng(31)
    for _ in range(40):
        shape = (int(rng.integers(1, 5)), int(rng.integers(1, 5)))
        mat = rng.integers(-4, 5, size=shape).tolist()
        divs = smith_normal_form(mat)
        dets = _determinant_divisors(mat)
        expect = []
        prev = 1
        for dk in dets[:len(divs)]:
            expect.append(dk // prev)
            prev = dk
        assert divs == expect


def test_exhaustive_collapsible():
    assert exhaustive_collapsible(simplex(3)) == "yes"
    assert exhaustive_collapsible(build_sigma(2)) == "yes"
    assert exhaustive_collapsible(dunce_hat()) == "no"
    assert exhaustive_collapsible(simplex_boundary(2)) == "no"
    assert exhaustive_collapsible(build_two_optima(), node_budget=10) == "unknown"


def test_exhaustive_nonevasive():
    assert exhaustive_nonevasive(simplex(4)) == "yes"
    # one free face is too few for nonevasiveness
    assert exhaustive_nonevasive(build_sigma(2)) == "no"
    assert exhaustive_nonevasive(simplex_boundary(2)) == "no"


def test_cones_are_nonevasive(random_complex):
    rng = np.random.default_rng(37)
    for _ in range(10):
        K = cone(random_complex(rng, 5, 2, 5))
        assert exhaustive_nonevasive(K) == "yes"


def test_nonevasive_implies_two_free_faces(random_complex):
    rng = np.random.default_rng(41)
    seen = 0
    for _ in range(60):
        K = random_complex(rng, 6, 2, 6)
        if K.dim < 1:
            continue
        if exhaustive_nonevasive(K) == "yes":
            seen += 1
            assert len(K.free_faces()) >= 2
    assert seen >= 5  # the sample actually exercised the implication


def test_morse_consistency_checks(poincare):
    assert check_morse_consistency(poincare, (1, 2, 2, 1)) == []
    assert check_morse_consistency(poincare, (1, 0, 0, 1)) == []
    bad_chi = check_morse_consistency(poincare, (1, 0, 0, 0))
    assert any("Euler" in v or "alternating" in v for v in bad_chi)
    assert check_morse_consistency(simplex(2), (-1, 2, 0)) != []
    above = check_morse_consistency(simplex(2), (1, 0, 0, 1, 1))
    assert above != []
    # chi fine but a Betti bound broken: no run can use fewer than b_i cells
    squeezed = check_morse_consistency(TORUS, (2, 2, 0))
    assert any("b_" in v or "Betti" in v for v in squeezed)
