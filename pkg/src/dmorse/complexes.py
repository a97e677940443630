"""Abstract simplicial complexes with explicit face storage.

Faces are strictly increasing tuples of positive integer vertex ids.
A complex stores every face of every dimension (not just facets), so
cofacet queries, free-face detection and the deconstruction engine all
run on the same canonical, lexicographically ordered face lists.
"""

from __future__ import annotations

import bisect
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

Face = tuple  # sorted tuple of positive ints; dimension = len - 1


class QuotientUnsafeError(ValueError):
    """A vertex map sends two vertices of one face to the same image."""


class LinkConditionViolatedError(ValueError):
    """Edge contraction would change the topology (link test failed)."""


class FVector(tuple):
    """Face counts (f_0, ..., f_d) with the Euler characteristic."""

    @property
    def euler_characteristic(self) -> int:
        return sum(c if i % 2 == 0 else -c for i, c in enumerate(self))


def as_face(vertices: Iterable[int]) -> Face:
    """Normalize a vertex collection into a face tuple, validating it."""
    face = tuple(sorted(vertices))
    if not face:
        raise ValueError("empty face")
    if any(v <= 0 or not isinstance(v, int) for v in face):
        raise ValueError(f"vertex ids must be positive integers: {face}")
    for a, b in zip(face, face[1:]):
        if a == b:
            raise ValueError(f"face has a repeated vertex: {face}")
    return face


class SimplicialComplex:
    """Immutable simplicial complex; all operations return new complexes.

    Never mutate a complex in place: shared, cached incidence data
    (used by the deconstruction engine) assumes the face lists are
    frozen once built.
    """

    __slots__ = ("_faces", "_cofacet_map", "_cache")

    def __init__(self, faces_by_dim: Sequence[Sequence[Face]]):
        # trust the caller only about closedness; normalize ordering
        self._faces = tuple(tuple(sorted(level)) for level in faces_by_dim)
        while self._faces and not self._faces[-1]:
            self._faces = self._faces[:-1]
        self._cofacet_map = None
        self._cache = {}

    # -- construction ------------------------------------------------

    @classmethod
    def from_facets(cls, facet_list: Iterable[Iterable[int]]) -> "SimplicialComplex":
        """Downward closure of the given facets.

        Input faces contained in other input faces are absorbed.
        Raises ValueError on empty input or malformed faces.
        """
        facets = [as_face(f) for f in facet_list]
        if not facets:
            raise ValueError("no facets given")
        maxdim = max(len(f) for f in facets) - 1
        levels = [set() for _ in range(maxdim + 1)]
        for f in facets:
            levels[len(f) - 1].add(f)
        for k in range(maxdim, 0, -1):
            lower = levels[k - 1]
            for f in levels[k]:
                lower.update(combinations(f, k))
        return cls(levels)

    @classmethod
    def empty(cls) -> "SimplicialComplex":
        return cls(())

    # -- basic queries -----------------------------------------------

    @property
    def dim(self) -> int:
        return len(self._faces) - 1

    def faces(self, k: int) -> Sequence[Face]:
        """Lex-sorted tuple of k-dimensional faces (empty if out of range)."""
        if 0 <= k <= self.dim:
            return self._faces[k]
        return ()

    def all_faces(self) -> Iterator[Face]:
        for level in self._faces:
            yield from level

    def n_faces(self, k: int) -> int:
        return len(self.faces(k))

    @property
    def vertices(self) -> Sequence[int]:
        return tuple(v for (v,) in self.faces(0))

    def __contains__(self, face) -> bool:
        face = tuple(sorted(face))
        k = len(face) - 1
        if not (0 <= k <= self.dim):
            return False
        level = self._faces[k]
        i = bisect.bisect_left(level, face)
        return i < len(level) and level[i] == face

    def __len__(self) -> int:
        return sum(len(level) for level in self._faces)

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and self._faces == other._faces

    def __hash__(self):
        return hash(self._faces)

    def __repr__(self) -> str:
        if self.dim < 0:
            return "SimplicialComplex(empty)"
        return f"SimplicialComplex(f={tuple(self.f_vector())})"

    def f_vector(self) -> FVector:
        return FVector(len(level) for level in self._faces)

    @property
    def euler_characteristic(self) -> int:
        return self.f_vector().euler_characteristic

    def facets(self) -> list:
        """Maximal faces, grouped by dimension, lex-sorted within each."""
        out = []
        for k in range(self.dim + 1):
            if k == self.dim:
                out.extend(self._faces[k])
                continue
            above = set()
            for f in self._faces[k + 1]:
                above.update(combinations(f, k + 1))
            out.extend(f for f in self._faces[k] if f not in above)
        return out

    # -- incidence ---------------------------------------------------

    def cofacets(self, face: Face) -> Sequence[Face]:
        """Faces of dimension dim(face)+1 containing the face."""
        return self._cofacets().get(tuple(sorted(face)), ())

    def _cofacets(self) -> Mapping[Face, Sequence[Face]]:
        if self._cofacet_map is None:
            cof = {f: [] for level in self._faces for f in level}
            for k in range(1, self.dim + 1):
                for f in self._faces[k]:
                    for s in combinations(f, k):
                        cof[s].append(f)
            self._cofacet_map = cof
        return self._cofacet_map

    def free_faces(self) -> list:
        """All pairs (sigma, tau) with tau the unique proper coface of sigma.

        sigma has exactly one proper coface iff it has exactly one
        cofacet tau and tau is itself maximal.
        """
        pairs = []
        cof = self._cofacets()
        for k in range(self.dim):
            for f in self._faces[k]:
                cofs = cof[f]
                if len(cofs) == 1 and not cof[cofs[0]]:
                    pairs.append((f, cofs[0]))
        return pairs

    # -- structural operations ----------------------------------------

    def link_of(self, face) -> "SimplicialComplex":
        """Link subcomplex of a face (may be empty)."""
        face = tuple(sorted(face))
        if face not in self:
            raise ValueError(f"face {face} not in complex")
        fset = set(face)
        out = []
        for k in range(len(face) - 1, self.dim + 1):
            for g in self._faces[k]:
                if fset.issubset(g):
                    rest = tuple(v for v in g if v not in fset)
                    if rest:
                        out.append(rest)
        if not out:
            return SimplicialComplex.empty()
        return SimplicialComplex.from_facets(out)

    def closed_star_of(self, face) -> "SimplicialComplex":
        """Closure of all faces containing the given face."""
        face = tuple(sorted(face))
        if face not in self:
            raise ValueError(f"face {face} not in complex")
        fset = set(face)
        carriers = [g for g in self.facets() if fset.issubset(g)]
        return SimplicialComplex.from_facets(carriers)

    def delete_vertex(self, v: int) -> "SimplicialComplex":
        """Subcomplex of all faces avoiding the vertex."""
        if (v,) not in self:
            raise ValueError(f"vertex {v} not in complex")
        levels = [[f for f in level if v not in f] for level in self._faces]
        return SimplicialComplex(levels)

    def boundary_complex(self) -> "SimplicialComplex":
        """Closure of the ridges contained in exactly one facet (pure input)."""
        d = self.dim
        if d < 1:
            raise ValueError("boundary of a 0-dimensional complex")
        for k in range(d):
            for f in self._faces[k]:
                if not self._cofacets()[f]:
                    raise ValueError(f"complex is not pure: maximal face {f}")
        counts = {}
        for f in self._faces[d]:
            for s in combinations(f, d):
                counts[s] = counts.get(s, 0) + 1
        rim = [s for s, c in counts.items() if c == 1]
        if not rim:
            return SimplicialComplex.empty()
        return SimplicialComplex.from_facets(rim)

    def apply_map(self, vertex_map: Mapping[int, int]) -> "SimplicialComplex":
        """Image complex under a vertex map (identity off its domain).

        Distinct faces may merge; a single face losing dimension is a
        QuotientUnsafeError, since every quotient performed here is
        meant to identify vertex-disjoint faces.
        """
        images = []
        for f in self.facets():
            img = [vertex_map.get(v, v) for v in f]
            if len(set(img)) != len(img):
                raise QuotientUnsafeError(
                    f"face {f} has two vertices with equal image {sorted(img)}"
                )
            images.append(img)
        # non-facet faces cannot degenerate if no facet does
        if not images:
            return SimplicialComplex.empty()
        return SimplicialComplex.from_facets(images)

    def contract_edge(self, edge) -> "SimplicialComplex":
        """Contract an edge {u, v}, replacing v by u everywhere.

        Requires the link condition link(u) * link(v) = link({u,v});
        violation raises LinkConditionViolatedError.
        """
        u, v = sorted(edge)
        if (u, v) not in self:
            raise ValueError(f"edge {(u, v)} not in complex")
        lk_u = set(self.link_of((u,)).all_faces())
        lk_v = set(self.link_of((v,)).all_faces())
        lk_uv = set(self.link_of((u, v)).all_faces())
        if (lk_u & lk_v) != lk_uv:
            raise LinkConditionViolatedError(
                f"link(u) and link(v) meet outside link(uv) for edge {(u, v)}"
            )
        out = []
        for f in self.facets():
            img = sorted(set(u if x == v else x for x in f))
            out.append(img)
        return SimplicialComplex.from_facets(out)


def union(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    """Union of two complexes on a shared vertex-id namespace."""
    maxdim = max(K.dim, L.dim)
    levels = []
    for k in range(maxdim + 1):
        levels.append(set(K.faces(k)) | set(L.faces(k)))
    return SimplicialComplex(levels)
