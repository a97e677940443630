"""Independent mathematical oracles.

Integer simplicial homology (Smith normal form over the integers, with a
prime-field rank mode for large inputs), Morse-inequality consistency
checks, and exhaustive collapsibility / non-evasiveness decisions on small
complexes.

Boundary orientation convention: faces are sorted vertex tuples and the
boundary of a k-face picks up sign (-1)**j when dropping the j-th vertex.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .complexes import SimplicialComplex

__all__ = [
    "BettiVector",
    "SizeLimitExceeded",
    "betti_numbers",
    "check_morse_consistency",
    "exhaustive_collapsible",
    "exhaustive_nonevasive",
    "smith_normal_form",
]


class SizeLimitExceeded(RuntimeError):
    """Complex too large for the requested homology mode."""


@dataclass(frozen=True)
class BettiVector:
    """Homology ranks b_0..b_d plus torsion coefficients per dimension.

    ``torsion[k]`` lists the orders of the finite cyclic summands of H_k
    (each dividing the next).  In prime-field mode the ranks are F_p
    dimensions and every torsion list is empty.
    """

    ranks: tuple
    torsion: tuple

    @property
    def alternating_sum(self) -> int:
        return sum((-1) ** i * b for i, b in enumerate(self.ranks))

    @property
    def total(self) -> int:
        """Sum of the (unreduced) Betti numbers."""
        return sum(self.ranks)

    def __str__(self) -> str:
        parts = []
        for i, b in enumerate(self.ranks):
            t = list(self.torsion[i]) if i < len(self.torsion) else []
            parts.append(f"b_{i}={b}" + (f" torsion {t}" if t else ""))
        return "; ".join(parts) if parts else "empty"


# -- chain complex with unit-pivot eliminations ------------------------

class _ChainCells:
    """Mutable cell-by-cell chain complex, augmented with an empty cell.

    Both elimination moves below delete a pair of cells whose pivot entry
    is the only entry of its row (reduction) or column (coreduction), so
    no fill-in ever occurs and all coefficients stay +-1; homology over
    the integers is preserved by either move.
    """

    def __init__(self, K: SimplicialComplex):
        dims = [-1]
        bnd = [{}]  # cell id -> {lower cell id: coefficient}
        index = {(): 0}
        for k in range(K.dim + 1):
            for f in K.faces(k):
                index[f] = len(dims)
                dims.append(k)
                if k == 0:
                    bnd.append({0: 1})
                else:
                    cell = {}
                    for j in range(k + 1):
                        sub = f[:j] + f[j + 1:]
                        cell[index[sub]] = 1 if j % 2 == 0 else -1
                    bnd.append(cell)
        cob = [set() for _ in dims]
        for c, cell in enumerate(bnd):
            for b in cell:
                cob[b].add(c)
        self.dims = dims
        self.bnd = bnd
        self.cob = cob
        self.alive = [True] * len(dims)

    def _kill_pair(self, low: int, high: int, coreduce_queue, reduce_queue):
        """Remove cells low/high and every incidence entry they own."""
        self.alive[low] = False
        self.alive[high] = False
        # drop high from boundaries of cells above it
        for x in self.cob[high]:
            if self.alive[x]:
                del self.bnd[x][high]
                if len(self.bnd[x]) == 1:
                    coreduce_queue.append(x)
        # drop low from boundaries of its remaining cofaces
        for c in self.cob[low]:
            if self.alive[c]:
                del self.bnd[c][low]
                if len(self.bnd[c]) == 1:
                    coreduce_queue.append(c)
        # cells below the pair lose a coface each
        for t in self.bnd[low]:
            if self.alive[t]:
                self.cob[t].discard(low)
                if len(self.cob[t]) == 1:
                    reduce_queue.append(t)
        for t in self.bnd[high]:
            if self.alive[t]:
                self.cob[t].discard(high)
                if len(self.cob[t]) == 1:
                    reduce_queue.append(t)
        self.bnd[low] = {}
        self.bnd[high] = {}
        self.cob[low] = set()
        self.cob[high] = set()

    def eliminate(self):
        """Run coreductions and reductions to exhaustion."""
        coreduce = deque(c for c, cell in enumerate(self.bnd)
                         if self.alive[c] and len(cell) == 1)
        reduce_ = deque(c for c, cofs in enumerate(self.cob)
                        if self.alive[c] and len(cofs) == 1)
        while coreduce or reduce_:
            while coreduce:
                c = coreduce.popleft()
                if not self.alive[c] or len(self.bnd[c]) != 1:
                    continue
                (b,) = self.bnd[c]
                if not self.alive[b]:  # pragma: no cover - defensive
                    continue
                self._kill_pair(b, c, coreduce, reduce_)
            while reduce_:
                b = reduce_.popleft()
                if not self.alive[b] or len(self.cob[b]) != 1:
                    continue
                (c,) = self.cob[b]
                if not self.alive[c] or b not in self.bnd[c]:  # pragma: no cover
                    continue
                self._kill_pair(b, c, coreduce, reduce_)

    def residual_matrices(self):
        """Surviving boundary operators D_k: C_k -> C_{k-1} as sparse columns.

        Returns (cells_per_dim, matrices): cells_per_dim[j] counts the
        alive cells of dimension j-1 (augmentation first); matrices[k]
        holds one dict per alive k-cell, mapping the position of an
        alive (k-1)-cell to its +-1 coefficient.
        """
        top = max((self.dims[c] for c in range(len(self.dims))
                   if self.alive[c]), default=-2)
        if top == -2:
            return [], {}
        by_dim = {}
        for c, alive in enumerate(self.alive):
            if alive:
                by_dim.setdefault(self.dims[c], []).append(c)
        pos = {}
        for cells in by_dim.values():
            for i, c in enumerate(cells):
                pos[c] = i
        counts = [len(by_dim.get(k, ())) for k in range(-1, top + 1)]
        mats = {}
        for k in range(0, top + 1):
            mats[k] = [{pos[b]: coef for b, coef in self.bnd[c].items()}
                       for c in by_dim.get(k, ())]
        return counts, mats


# -- Smith normal form -------------------------------------------------

def smith_normal_form(matrix) -> list:
    """Nonzero elementary divisors of an integer matrix, d_1 | d_2 | ...

    Plain row/column Euclidean elimination over Python integers with a
    smallest-pivot heuristic to keep entries from exploding.
    """
    m = [[int(x) for x in row] for row in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    divisors = []
    r = 0
    while True:
        best = None
        for i in range(r, rows):
            for j in range(r, cols):
                v = m[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, pi, pj = best
        m[r], m[pi] = m[pi], m[r]
        for row in m:
            row[r], row[pj] = row[pj], row[r]
        while True:
            pivot = m[r][r]
            touched = False
            for i in range(r + 1, rows):
                q = m[i][r] // pivot
                if q:
                    for j in range(r, cols):
                        m[i][j] -= q * m[r][j]
                if m[i][r]:
                    m[r], m[i] = m[i], m[r]
                    touched = True
                    break
            if touched:
                continue
            for j in range(r + 1, cols):
                q = m[r][j] // pivot
                if q:
                    for row in m:
                        row[j] -= q * row[r]
                if m[r][j]:
                    for row in m:
                        row[r], row[j] = row[j], row[r]
                    touched = True
                    break
            if not touched:
                break
        pivot = m[r][r]
        fixed = True
        for i in range(r + 1, rows):
            for j in range(r + 1, cols):
                if m[i][j] % pivot:
                    for jj in range(r, cols):
                        m[r][jj] += m[i][jj]
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue
        divisors.append(abs(pivot))
        r += 1
    return divisors


def _rank_mod_2(columns) -> int:
    """Rank over F_2 of sparse columns, each given as a support dict."""
    cols = {}
    rows: dict = {}
    for j, col in enumerate(columns):
        c = {r for r, v in col.items() if v % 2}
        if c:
            cols[j] = c
            for r in c:
                rows.setdefault(r, set()).add(j)
    heap = [(len(c), j) for j, c in cols.items()]
    heapq.heapify(heap)
    rank = 0
    while heap:
        size, j = heapq.heappop(heap)
        col = cols.get(j)
        if col is None:
            continue
        if len(col) != size:  # stale entry, reinsert at the current size
            heapq.heappush(heap, (len(col), j))
            continue
        r = min(col, key=lambda t: len(rows[t]))
        rank += 1
        del cols[j]
        for t in col:
            rows[t].discard(j)
        for i in tuple(rows[r]):
            other = cols[i]
            for t in col:
                if t in other:
                    other.discard(t)
                    rows[t].discard(i)
                else:
                    other.add(t)
                    rows[t].add(i)
            if other:
                heapq.heappush(heap, (len(other), i))
            else:
                del cols[i]
    return rank


def _rank_mod_p(columns, p: int) -> int:
    """Rank over F_p of a sparse integer matrix given as column dicts.

    Gaussian elimination, always pivoting on a smallest surviving column
    and within it on the row met by fewest other columns, which keeps
    fill-in low on the near-disjoint +-1 columns boundary operators have.
    """
    if p < 2:
        raise ValueError(f"need a prime >= 2, got {p}")
    if p == 2:
        return _rank_mod_2(columns)
    cols = {}
    rows: dict = {}
    for j, col in enumerate(columns):
        c = {r: v % p for r, v in col.items() if v % p}
        if c:
            cols[j] = c
            for r in c:
                rows.setdefault(r, set()).add(j)
    heap = [(len(c), j) for j, c in cols.items()]
    heapq.heapify(heap)
    rank = 0
    while heap:
        size, j = heapq.heappop(heap)
        col = cols.get(j)
        if col is None:
            continue
        if len(col) != size:
            heapq.heappush(heap, (len(col), j))
            continue
        r = min(col, key=lambda t: len(rows[t]))
        rank += 1
        inv = pow(col[r], p - 2, p)
        piv = {t: (v * inv) % p for t, v in col.items()}
        del cols[j]
        for t in piv:
            rows[t].discard(j)
        for i in tuple(rows[r]):
            other = cols[i]
            factor = other[r]
            for t, v in piv.items():
                w = (other.get(t, 0) - factor * v) % p
                if w:
                    if t not in other:
                        rows[t].add(i)
                    other[t] = w
                elif t in other:
                    del other[t]
                    rows[t].discard(i)
            if other:
                heapq.heappush(heap, (len(other), i))
            else:
                del cols[i]
    return rank


def _densify(columns, nrows: int):
    """Sparse column dicts to a dense row-major list matrix."""
    mat = [[0] * len(columns) for _ in range(nrows)]
    for j, col in enumerate(columns):
        for r, v in col.items():
            mat[r][j] = v
    return mat


def betti_numbers(K: SimplicialComplex,
                  size_limit: Optional[int] = 100_000,
                  prime: Optional[int] = None) -> BettiVector:
    """Homology of a complex: ranks plus torsion coefficients.

    Exact integer homology by default.  With ``prime=p`` only F_p ranks
    are computed (no torsion), which handles much larger complexes.  The
    chain complex is first shrunk by unit-pivot eliminations, so only a
    small residual ever reaches the matrix algorithms.
    """
    if K.dim < 0:
        return BettiVector((), ())
    n = len(K)
    if size_limit is not None and n > size_limit and prime is None:
        raise SizeLimitExceeded(
            f"{n} faces exceeds size_limit={size_limit}; "
            "pass prime=p for field-rank mode or raise the limit")
    cells = _ChainCells(K)
    cells.eliminate()
    counts, mats = cells.residual_matrices()
    dim = K.dim
    reduced = [0] * (dim + 2)  # index 0 is the augmentation dimension
    torsion = [()] * (dim + 2)
    if counts:
        top = len(counts) - 2
        ranks = {}
        tors = {}
        for k, mat in mats.items():
            if not any(mat):
                ranks[k] = 0
                tors[k] = ()
                continue
            if prime is not None:
                ranks[k] = _rank_mod_p(mat, prime)
                tors[k] = ()
            else:
                divs = smith_normal_form(_densify(mat, counts[k]))
                ranks[k] = len(divs)
                tors[k] = tuple(d for d in divs if d > 1)
        for k in range(-1, top + 1):
            nk = counts[k + 1]
            reduced[k + 1] = nk - ranks.get(k, 0) - ranks.get(k + 1, 0)
            torsion[k + 1] = tors.get(k + 1, ())
    if reduced[0]:
        raise AssertionError("augmented complex left homology in degree -1")
    b = [reduced[k + 1] for k in range(dim + 1)]
    b[0] += 1
    return BettiVector(tuple(b), tuple(torsion[1:dim + 2]))


# -- Morse consistency --------------------------------------------------

def check_morse_consistency(K: SimplicialComplex, vector,
                            betti: Optional[BettiVector] = None,
                            betti_face_limit: int = 20_000) -> list:
    """Necessary conditions on a critical-cell count vector.

    Returns a list of violation messages (empty means consistent): the
    alternating sum must equal the Euler characteristic and each count
    must dominate the matching Betti number.  Passing these checks does
    not certify that the vector is realizable.
    """
    violations = []
    v = tuple(int(c) for c in vector)
    if any(c < 0 for c in v):
        violations.append(f"negative critical count in {v}")
    if len(v) > K.dim + 1 and any(v[K.dim + 1:]):
        violations.append(
            f"critical cells above the complex dimension {K.dim} in {v}")
    alt = sum((-1) ** i * c for i, c in enumerate(v))
    chi = K.euler_characteristic
    if alt != chi:
        violations.append(
            f"alternating sum {alt} differs from Euler characteristic {chi}")
    if betti is None and len(K) <= betti_face_limit:
        betti = betti_numbers(K)
    if betti is not None:
        for i, b in enumerate(betti.ranks):
            c = v[i] if i < len(v) else 0
            if c < b:
                violations.append(
                    f"count c_{i}={c} below Betti number b_{i}={b}")
    return violations


# -- exhaustive small-complex oracles -----------------------------------

def _facet_key(K: SimplicialComplex):
    return frozenset(K.facets())


def exhaustive_collapsible(K: SimplicialComplex,
                           node_budget: int = 200_000) -> str:
    """Decide collapsibility by backtracking over free-pair choices.

    Returns ``"yes"`` / ``"no"`` / ``"unknown"`` (budget exhausted).
    Memoizes on the residual facet set, so only genuinely distinct
    residual complexes are explored.
    """
    if len(K) == 0:
        return "no"
    memo = {}
    budget = [node_budget]

    def search(C: SimplicialComplex):
        if len(C) == 1:
            return True
        key = _facet_key(C)
        if key in memo:
            return memo[key]
        if budget[0] <= 0:
            return None
        budget[0] -= 1
        saw_unknown = False
        for sigma, tau in C.free_faces():
            faces = [list(level) for level in C._faces]
            faces[len(sigma) - 1].remove(sigma)
            faces[len(tau) - 1].remove(tau)
            while faces and not faces[-1]:
                faces.pop()
            child = SimplicialComplex(faces)
            res = search(child)
            if res is True:
                memo[key] = True
                return True
            if res is None:
                saw_unknown = True
        if saw_unknown:
            return None
        memo[key] = False
        return False

    res = search(K)
    return "yes" if res else ("unknown" if res is None else "no")


def exhaustive_nonevasive(K: SimplicialComplex,
                          node_budget: int = 200_000) -> str:
    """Decide non-evasiveness recursively with memoization.

    A point is non-evasive; otherwise some vertex must have a
    non-evasive link and a non-evasive deletion.  Returns ``"yes"`` /
    ``"no"`` / ``"unknown"``.
    """
    memo = {}
    budget = [node_budget]

    def search(C: SimplicialComplex):
        if len(C) == 0:
            return False
        if len(C) == 1:
            return True
        key = _facet_key(C)
        if key in memo:
            return memo[key]
        if budget[0] <= 0:
            return None
        budget[0] -= 1
        saw_unknown = False
        for v in C.vertices:
            res_link = search(C.link_of((v,)))
            if res_link is False:
                continue
            res_del = search(C.delete_vertex(v))
            if res_link is True and res_del is True:
                memo[key] = True
                return True
            if res_link is None or res_del is None:
                saw_unknown = True
        if saw_unknown:
            return None
        memo[key] = False
        return False

    res = search(K)
    return "yes" if res else ("unknown" if res is None else "no")
