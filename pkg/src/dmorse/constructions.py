"""Generators for named complexes and the operators used to build them.

Standard small complexes (simplices, cross-polytopes, cube face
lattices), subdivision / cone / product operators, and the extremal
complexes the deconstruction engine is meant to probe: the
one-free-face family ``build_sigma``, the two-free-face family
``build_E``, the fully hard-coded ``build_two_optima``, and the
helpers backing the five-dimensional pipeline.

Vertex-label conventions used by the antiprism family, with
``n = 2**d``:

* cross-polytope vertices ``1..d`` with antipodes ``n+d+1+i``,
* cube vertices ``d+2 .. n+d+1`` (vertex with label ``d+2+c`` sits at
  the corner whose coordinate bits are the bits of ``c``),
* label ``d+1`` is reserved for the image of the stacking vertices.

The antipode of cube corner ``c`` in the cross-polytope is the facet
with sign bits ``c XOR 1``, so the all-positive facet ``{1,..,d}`` is
dual to cube vertex ``d+3`` and survives unstacked.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Mapping, Optional, Sequence

from .complexes import Face, FVector, SimplicialComplex, as_face, union

__all__ = [
    "PolytopalComplex",
    "antiprism_triangulation",
    "barycenter_ids",
    "barycentric_subdivision",
    "basic",
    "build_E",
    "build_sigma",
    "build_sigma2_sigma3prime",
    "build_two_optima",
    "cone",
    "cross_polytope",
    "cube_lattice",
    "dunce_hat",
    "one_point_suspension",
    "product_with_interval",
    "pulling_triangulation",
    "sigma_facets",
    "simplex",
    "simplex_boundary",
    "simplicial_neighborhood",
    "stack_facet",
    "stellar_subdivision",
    "subdivision_f_vector",
    "suspension",
]


# ---------------------------------------------------------------- basics


def simplex(d: int) -> SimplicialComplex:
    """Closure of the full d-simplex on vertices 1..d+1."""
    if d < 0:
        raise ValueError("dimension must be nonnegative")
    return SimplicialComplex.from_facets([tuple(range(1, d + 2))])


def simplex_boundary(d: int) -> SimplicialComplex:
    """Boundary sphere of the d-simplex on vertices 1..d+1."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    return SimplicialComplex.from_facets(combinations(range(1, d + 2), d))


def cross_polytope(d: int) -> SimplicialComplex:
    """Boundary of the d-dimensional cross-polytope.

    Vertex i and its antipode d+i form the i-th axis pair; the 2**d
    facets pick one vertex from each pair.
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    return SimplicialComplex.from_facets(
        tuple(sorted(i + 1 + d * e for i, e in enumerate(eps)))
        for eps in product((0, 1), repeat=d)
    )


@dataclass(frozen=True)
class PolytopalComplex:
    """Graded cell complex: vertex sets per cell plus the cover relation.

    ``cells[k]`` lists the k-cells as sorted vertex tuples; ``covers``
    maps each cell of positive dimension to the cells one dimension
    below it.  Only used as input to ``pulling_triangulation``.
    """

    cells: tuple
    covers: Mapping[Face, tuple]

    @property
    def dim(self) -> int:
        return len(self.cells) - 1


def _cube_corner_labels(free: Sequence[int], bits: int, base: int) -> list:
    codes = [bits]
    for j in free:
        codes += [c | (1 << j) for c in codes]
    return sorted(base + c for c in codes)


def cube_lattice(d: int) -> PolytopalComplex:
    """Face lattice of the d-cube on vertex labels d+2 .. 2**d+d+1."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    base = d + 2
    levels: list = [[] for _ in range(d + 1)]
    covers: dict = {}
    for k in range(d + 1):
        for free in combinations(range(d), k):
            fixed = [j for j in range(d) if j not in free]
            for assignment in product((0, 1), repeat=len(fixed)):
                bits = 0
                for j, b in zip(fixed, assignment):
                    bits |= b << j
                cell = tuple(_cube_corner_labels(free, bits, base))
                levels[k].append(cell)
                if k > 0:
                    covers[cell] = tuple(
                        tuple(_cube_corner_labels(
                            tuple(i for i in free if i != j),
                            bits | (b << j), base))
                        for j in free
                        for b in (0, 1)
                    )
    return PolytopalComplex(tuple(tuple(sorted(lv)) for lv in levels), covers)


def basic(kind: str, d: int):
    """Dispatch to one of the standard generators by name."""
    builders = {
        "simplex": simplex,
        "simplex_boundary": simplex_boundary,
        "cross_polytope": cross_polytope,
        "cube_lattice": cube_lattice,
    }
    if kind not in builders:
        raise ValueError(f"unknown kind {kind!r}")
    return builders[kind](d)


# ------------------------------------------------- cones and suspensions


def cone(K: SimplicialComplex, apex: Optional[int] = None) -> SimplicialComplex:
    """Join of K with one fresh vertex (defaults to max label + 1)."""
    if K.dim < 0:
        raise ValueError("cone over the empty complex")
    if apex is None:
        apex = max(K.vertices) + 1
    elif (apex,) in K:
        raise ValueError(f"apex {apex} already present")
    return SimplicialComplex.from_facets(f + (apex,) for f in K.facets())


def suspension(K: SimplicialComplex) -> SimplicialComplex:
    """Join of K with two fresh vertices (max label + 1 and + 2)."""
    if K.dim < 0:
        raise ValueError("suspension of the empty complex")
    a = max(K.vertices) + 1
    facets = K.facets()
    return SimplicialComplex.from_facets(
        [f + (a,) for f in facets] + [f + (a + 1,) for f in facets]
    )


def one_point_suspension(K: SimplicialComplex, v: int) -> SimplicialComplex:
    """Suspension with one apex edge contracted onto the vertex v.

    Adds a single new vertex: the second apex is merged into v, which
    is always a legal contraction when the apex edge comes from a
    genuine suspension.
    """
    if (v,) not in K:
        raise ValueError(f"vertex {v} not in complex")
    S = suspension(K)
    second_apex = max(K.vertices) + 2
    return S.contract_edge((v, second_apex))


# ------------------------------------------------------------ subdivision


def barycenter_ids(K: SimplicialComplex) -> dict:
    """Stable barycenter numbering: 1-based rank in the (dimension, lex) order."""
    ids: dict = {}
    n = 0
    for k in range(K.dim + 1):
        for f in K.faces(k):
            n += 1
            ids[f] = n
    return ids


def _flag_facets(faces: Sequence[Face], ids: Mapping[Face, int]) -> list:
    """Barycenter chains of all orderings of each given face.

    Barycenter ids grow with dimension, so each chain is already sorted.
    """
    out = []
    for F in faces:
        for perm in permutations(F):
            acc: list = []
            chain = []
            for v in perm:
                acc.append(v)
                chain.append(ids[tuple(sorted(acc))])
            out.append(tuple(chain))
    return out


def barycentric_subdivision(K: SimplicialComplex, iterations: int = 1) -> SimplicialComplex:
    """Subdivision whose vertices are faces and whose faces are chains.

    Vertex labels follow ``barycenter_ids``.  ``iterations`` composes
    the operation.
    """
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    for _ in range(iterations):
        K = SimplicialComplex.from_facets(_flag_facets(K.facets(), barycenter_ids(K)))
    return K


def subdivision_f_vector(K: SimplicialComplex) -> FVector:
    """f-vector of the barycentric subdivision, computed by chain counting.

    Avoids materializing the subdivision: f_{j-1}(sd) is the number of
    j-element chains in the face poset, accumulated bottom-up.
    """
    if K.dim < 0:
        return FVector(())
    chains: dict = {}
    totals = [0] * (K.dim + 1)
    for k in range(K.dim + 1):
        for F in K.faces(k):
            c = [1] + [0] * k
            for r in range(1, k + 1):
                for G in combinations(F, r):
                    sub = chains[G]
                    for j, val in enumerate(sub):
                        c[j + 1] += val
            chains[F] = c
            for j, val in enumerate(c):
                totals[j] += val
    return FVector(totals)


def stellar_subdivision(K: SimplicialComplex, face,
                        new_vertex: Optional[int] = None) -> SimplicialComplex:
    """Replace the star of a face by the cone over its boundary-join.

    Every facet containing the face is split into one facet per vertex
    of the face, all sharing the fresh vertex.
    """
    face = as_face(face)
    if face not in K:
        raise ValueError(f"face {face} not in complex")
    if new_vertex is None:
        new_vertex = max(K.vertices) + 1
    elif (new_vertex,) in K:
        raise ValueError(f"vertex {new_vertex} already present")
    fset = set(face)
    out = []
    for F in K.facets():
        if fset.issubset(F):
            out.extend((new_vertex,) + tuple(x for x in F if x != s) for s in face)
        else:
            out.append(F)
    return SimplicialComplex.from_facets(out)


def stack_facet(K: SimplicialComplex, facet, fresh_vertex: int) -> SimplicialComplex:
    """Stellar subdivision of a maximal face with a chosen fresh vertex."""
    facet = as_face(facet)
    if facet not in K:
        raise ValueError(f"face {facet} not in complex")
    if any(set(facet) < set(g) for g in K.faces(len(facet))):
        raise ValueError(f"face {facet} is not maximal")
    return stellar_subdivision(K, facet, fresh_vertex)


# ---------------------------------------------------------------- products


def product_with_interval(K: SimplicialComplex) -> SimplicialComplex:
    """Staircase triangulation of K x [0,1] without new vertex positions.

    The bottom copy keeps the labels of K, the top copy shifts them by
    the maximum label.  Each facet v0<..<vk yields the k+1 simplices
    that switch from bottom to top at position i; the switch positions
    are forced by the global vertex order, so shared faces agree.
    """
    if K.dim < 0:
        raise ValueError("product with the empty complex")
    facets = K.facets()
    if any(len(F) != K.dim + 1 for F in facets):
        raise ValueError("complex is not pure")
    shift = max(K.vertices)
    out = []
    for F in facets:
        top = tuple(v + shift for v in F)
        out.extend(F[: i + 1] + top[i:] for i in range(len(F)))
    return SimplicialComplex.from_facets(out)


# ------------------------------------------------- pulling triangulation


def pulling_triangulation(P: PolytopalComplex,
                          vertex_order: Optional[Sequence[int]] = None) -> SimplicialComplex:
    """Triangulate a polytopal complex by pulling vertices in a fixed order.

    A cell that is already a simplex is kept; otherwise its first
    vertex in the order is joined to the pulled facets avoiding it.
    The result is independent of cell processing order.
    """
    labels = [v for (v,) in P.cells[0]]
    if vertex_order is None:
        order = sorted(labels)
    else:
        order = list(vertex_order)
        if sorted(order) != sorted(labels):
            raise ValueError("vertex_order is not a permutation of the vertices")
    rank = {v: i for i, v in enumerate(order)}
    dims = {c: k for k, level in enumerate(P.cells) for c in level}
    memo: dict = {}

    def pull(cell: Face) -> list:
        got = memo.get(cell)
        if got is not None:
            return got
        if len(cell) == dims[cell] + 1:
            out = [cell]
        else:
            u = min(cell, key=rank.__getitem__)
            out = [
                tuple(sorted((u,) + s))
                for G in P.covers[cell]
                if u not in G
                for s in pull(G)
            ]
        memo[cell] = out
        return out

    tris: list = []
    for top in P.cells[-1]:
        tris.extend(pull(top))
    return SimplicialComplex.from_facets(tris)


# ------------------------------------------------------ antiprism family


def _pull_cube_face(free: tuple, bits: int, rank: Sequence[int], memo: dict) -> list:
    """Pulled simplices of one cube face, as tuples of corner codes."""
    key = (free, bits)
    got = memo.get(key)
    if got is not None:
        return got
    if len(free) <= 1:
        codes = [bits]
        for j in free:
            codes.append(bits | (1 << j))
        out = [tuple(codes)]
    else:
        corners = [bits]
        for j in free:
            corners += [c | (1 << j) for c in corners]
        u = min(corners, key=rank.__getitem__)
        out = []
        for j in free:
            beta = 1 - ((u >> j) & 1)  # the facet in direction j avoiding u
            sub = _pull_cube_face(
                tuple(i for i in free if i != j), bits | (beta << j), rank, memo
            )
            out.extend(tuple(sorted((u,) + s)) for s in sub)
    memo[key] = out
    return out


def _antiprism_facets(d: int, pull_order: Optional[Sequence[int]]) -> list:
    """Top cells of the triangulated antiprism over the d-cross-polytope."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    base = d + 2
    ncube = 1 << d
    cube_labels = list(range(base, base + ncube))
    if pull_order is None:
        pull_order = cube_labels
    elif sorted(pull_order) != cube_labels:
        raise ValueError("pull_order is not a permutation of the cube vertex labels")
    rank = [0] * ncube
    for pos, label in enumerate(pull_order):
        rank[label - base] = pos
    prime = ncube + d + 1  # antipode of i is prime + i
    memo: dict = {}
    facets = []
    axes = list(range(1, d + 1))
    for m in range(1, d + 1):
        for S in combinations(axes, m):
            free = tuple(j for j in range(d) if (j + 1) not in S)
            for eps in product((0, 1), repeat=m):
                sigma = tuple(i if e == 0 else prime + i for i, e in zip(S, eps))
                bits = 0
                for i, e in zip(S, eps):
                    if e ^ (1 if i == 1 else 0):
                        bits |= 1 << (i - 1)
                for s in _pull_cube_face(free, bits, rank, memo):
                    facets.append(tuple(sorted(sigma + tuple(base + c for c in s))))
    for s in _pull_cube_face(tuple(range(d)), 0, rank, memo):
        facets.append(tuple(base + c for c in s))
    return facets


def antiprism_triangulation(d: int,
                            pull_order: Optional[Sequence[int]] = None) -> SimplicialComplex:
    """Triangulated ball between a cross-polytope and its inner dual cube.

    Every boundary face of the cross-polytope is joined to its dual
    cube face; those joins and the inner cube are then triangulated by
    pulling cube vertices in ``pull_order`` (default: ascending label).
    Cross-polytope boundary facets stay unsubdivided.
    """
    return SimplicialComplex.from_facets(_antiprism_facets(d, pull_order))


def sigma_facets(d: int) -> list:
    """Facet list of ``build_sigma(d)`` without building the closure.

    Keeps d = 7, 8 reachable: their facet lists fit in memory while the
    full face closures do not need to be materialized for vertex counts.
    """
    facets = _antiprism_facets(d, None)
    base = d + 2
    prime = (1 << d) + d + 1
    # stack every cross-polytope boundary facet except the all-positive
    # one, in lex order, with fresh labels following the antipode block
    carrier_of = {}
    for eps in product((0, 1), repeat=d):
        if not any(eps):
            continue
        sigma = tuple(sorted(i + 1 if e == 0 else prime + i + 1 for i, e in enumerate(eps)))
        code = sum(e << i for i, e in enumerate(eps)) ^ 1
        carrier_of[sigma] = tuple(sorted(sigma + (base + code,)))
    replaced = {}
    fresh = prime + d
    for sigma in sorted(carrier_of):
        fresh += 1
        phi = carrier_of[sigma]
        replaced[phi] = [
            tuple(sorted((fresh,) + tuple(x for x in phi if x != s))) for s in sigma
        ]
    out = []
    for F in facets:
        out.extend(replaced.get(F, [F]))
    if len(out) != len(facets) + (2 ** d - 1) * (d - 1):
        raise AssertionError("stacking did not replace every boundary facet")
    # fold the antipodes onto 1..d and all stacking vertices onto d+1
    relabel = {prime + i: i for i in range(1, d + 1)}
    relabel.update({prime + d + j: d + 1 for j in range(1, 2 ** d)})
    folded = {tuple(sorted(relabel.get(v, v) for v in F)) for F in out}
    return sorted(folded)


def build_sigma(d: int) -> SimplicialComplex:
    """Contractible d-complex with 2**d + d + 1 vertices and one free face.

    Antiprism triangulation, with every cross-polytope boundary facet
    except {1,..,d} stacked, antipodes folded onto 1..d and all
    stacking vertices folded onto d+1.  The unique free face is
    {1,..,d}.
    """
    return SimplicialComplex.from_facets(sigma_facets(d))


# ----------------------------------------------- hard-coded 3-dimensional


_TWELVE_OUTER_TRIANGLES = (
    (1, 3, 23), (1, 22, 23), (1, 22, 24), (1, 22, 25), (1, 24, 25), (2, 3, 25),
    (2, 22, 23), (2, 22, 24), (2, 22, 25), (2, 23, 24), (3, 23, 25), (23, 24, 25),
)

# the subdivided top triangle carrying the seven interior vertex copies
_LID_TRIANGLES = (
    (1, 2, 5), (1, 2, 6), (1, 3, 5), (1, 4, 6), (2, 5, 6), (3, 4, 6), (3, 5, 6),
)

_CONNECTOR_TETRAHEDRA = (
    (2, 3, 14, 15), (1, 2, 15, 16), (1, 3, 16, 17), (2, 3, 17, 18),
    (1, 2, 18, 19), (1, 3, 14, 19), (1, 3, 15, 20), (1, 2, 17, 20),
    (2, 3, 19, 20),
)

_SHIELD_TETRAHEDRA = (
    (1, 15, 16, 17), (1, 15, 17, 20), (2, 17, 18, 19), (2, 17, 19, 20),
    (3, 14, 15, 19), (3, 15, 19, 20), (15, 17, 19, 20),
)

_CENTRAL_CONE_TETRAHEDRA = (
    (1, 2, 14, 21), (1, 3, 18, 21), (1, 14, 19, 21), (1, 18, 19, 21),
    (2, 3, 16, 21), (2, 14, 15, 21), (2, 15, 16, 21), (3, 16, 17, 21),
    (3, 17, 18, 21), (14, 15, 19, 21), (15, 16, 17, 21), (15, 17, 19, 21),
    (17, 18, 19, 21), (1, 2, 3, 21),
)


def _filler_tetrahedra() -> list:
    """The 114 tetrahedra closing the solid body over the folded boundary."""
    tets = []
    for x in range(7, 14):
        tets.extend(t + (x,) for t in _LID_TRIANGLES)
        y = x + 7
        tets.extend([(1, 3, x, y), (1, 4, x, y), (3, 4, x, y),
                     (1, 2, 4, y), (2, 3, 4, y)])
    tets.extend(_CONNECTOR_TETRAHEDRA)
    tets.extend(_SHIELD_TETRAHEDRA)
    tets.extend(_CENTRAL_CONE_TETRAHEDRA)
    return [tuple(sorted(t)) for t in tets]


def build_sigma2_sigma3prime() -> SimplicialComplex:
    """The 25-vertex complex joining the 2- and 3-dimensional bodies.

    Twelve outer triangles around the grey triangle {1,2,3}, plus the
    114 tetrahedra filling the modified solid on top of it; face vector
    (25, 128, 218, 114) with a single free face {1,2,3}.
    """
    return SimplicialComplex.from_facets(
        list(_TWELVE_OUTER_TRIANGLES) + _filler_tetrahedra()
    )


_BLOCK_BASE_TRIANGLES = (
    (1, 2, 5), (1, 2, 6), (1, 2, 4), (1, 3, 5), (1, 4, 6),
    (2, 3, 4), (2, 5, 6), (3, 4, 6), (3, 5, 6),
)


def _blocker_tetrahedra(t: Face, a: int) -> list:
    """The 51 tetrahedra of one blocking body glued over the triangle t.

    Vertices a..a+8 are fresh; the body can only be entered through t,
    which is why gluing one over each lid triangle rules out collapses
    that would otherwise free the edge {1,2}.
    """
    t1, t2, t3 = t
    tets = []
    for b in range(a + 1, a + 8):
        tets.extend([(t1, t2, a, b), (t1, t3, a, b), (t2, t3, a, b)])
    tets.extend([
        (t2, t3, a + 1, a + 2), (t1, t2, a + 2, a + 3), (t1, t3, a + 3, a + 4),
        (t2, t3, a + 4, a + 5), (t1, t2, a + 5, a + 6), (t1, t3, a + 6, a + 1),
    ])
    tets.extend([(t1, t3, a + 2, a + 7), (t1, t2, a + 4, a + 7), (t2, t3, a + 6, a + 7)])
    tets.extend([
        (t1, a + 2, a + 3, a + 4), (t1, a + 2, a + 4, a + 7),
        (t2, a + 4, a + 5, a + 6), (t2, a + 4, a + 6, a + 7),
        (t3, a + 1, a + 2, a + 6), (t3, a + 2, a + 6, a + 7),
    ])
    tets.append((a + 2, a + 4, a + 6, a + 7))
    tets.extend([
        (t1, t2, t3, a + 8),
        (t1, t2, a + 1, a + 8), (t1, t3, a + 5, a + 8), (t2, t3, a + 3, a + 8),
        (t1, a + 1, a + 6, a + 8), (t1, a + 5, a + 6, a + 8),
        (t2, a + 1, a + 2, a + 8), (t2, a + 2, a + 3, a + 8),
        (t3, a + 3, a + 4, a + 8), (t3, a + 4, a + 5, a + 8),
        (a + 1, a + 2, a + 6, a + 8), (a + 2, a + 3, a + 4, a + 8),
        (a + 4, a + 5, a + 6, a + 8), (a + 2, a + 4, a + 6, a + 8),
    ])
    return [tuple(sorted(x)) for x in tets]


def build_two_optima() -> SimplicialComplex:
    """Contractible 3-complex whose two best reachable vectors differ.

    The 25-vertex body of ``build_sigma2_sigma3prime`` with one
    51-tetrahedron blocking body glued over each of the nine lid
    triangles (fresh vertex blocks starting at 26 + 9j).  Face vector
    (106, 596, 1064, 573); single free face {1,2,3}.
    """
    facets = list(_TWELVE_OUTER_TRIANGLES) + _filler_tetrahedra()
    for j, t in enumerate(_BLOCK_BASE_TRIANGLES):
        facets.extend(_blocker_tetrahedra(t, 26 + 9 * j))
    return SimplicialComplex.from_facets(facets)


_DUNCE_TRIANGLES = (
    (1, 2, 4), (2, 3, 4), (1, 3, 5), (1, 2, 5), (2, 3, 6), (1, 3, 6),
    (1, 3, 7), (2, 3, 7), (1, 2, 8), (3, 4, 5), (2, 5, 6), (1, 6, 7),
    (2, 7, 8), (1, 4, 8), (4, 5, 6), (4, 6, 7), (4, 7, 8),
)


def dunce_hat() -> SimplicialComplex:
    """The 8-vertex contractible 2-complex with no free face at all."""
    return SimplicialComplex.from_facets(_DUNCE_TRIANGLES)


# ------------------------------------------------------- derived families


def build_E(d: int) -> SimplicialComplex:
    """Complex with exactly two free faces sharing a codimension-one face.

    For d == 2 the barycentric subdivision of ``build_sigma(2)`` already
    has exactly two free edges meeting in the barycenter of the free
    edge.  For d >= 3: cone the (d-1)-dimensional one-free-face complex
    with apex w, glue the d-dimensional one on top by identifying its
    free face with {1,..,d-1,w}, subdivide, and cone the subdivided
    (d-1)-dimensional part once more with a fresh vertex to kill the
    freeness left on that side.  The two surviving free faces are the
    fresh-vertex chains through the old free pair.
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    if d == 2:
        return barycentric_subdivision(build_sigma(2))
    low = build_sigma(d - 1)
    w = max(low.vertices) + 1
    high = build_sigma(d)
    relabel = {d: w}
    relabel.update({k: k + w - d for k in range(d + 1, max(high.vertices) + 1)})
    glued = union(cone(low, w), high.apply_map(relabel))
    ids = barycenter_ids(glued)
    apex = len(ids) + 1
    lower_cone = [chain + (apex,) for chain in _flag_facets(low.facets(), ids)]
    return union(
        SimplicialComplex.from_facets(_flag_facets(glued.facets(), ids)),
        SimplicialComplex.from_facets(lower_cone),
    )


def simplicial_neighborhood(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    """Union of the closed stars in K of the vertices of a subcomplex L."""
    for f in L.all_faces():
        if f not in K:
            raise ValueError(f"face {f} of L is not in K")
    wanted = set(L.vertices)
    carriers = [F for F in K.facets() if wanted.intersection(F)]
    return SimplicialComplex.from_facets(carriers)
