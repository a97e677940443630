"""Staged construction of a contractible 5-complex around a singular edge.

Starting from a packaged 16-vertex homology 3-sphere, the builder
punctures it, thickens the result to a 4-ball, cones the boundary back
in, takes a one-point suspension, and finally extracts the simplicial
neighborhood -- inside the barycentric subdivision -- of the edge
joining the two suspension-like vertices.  Each stage pins the face
counts it is known to produce and aborts loudly on any mismatch, so a
silent regression in one of the operations cannot propagate.
"""

from dataclasses import dataclass, field
from itertools import permutations
from pathlib import Path
from time import perf_counter
from typing import Callable, Optional, Union
import importlib.resources

from .complexes import FVector, SimplicialComplex, union
from .constructions import (
    barycenter_ids,
    barycentric_subdivision,
    cone,
    one_point_suspension,
    product_with_interval,
    subdivision_f_vector,
)
from .fileio import read_complex

__all__ = [
    "PipelineError",
    "PipelineStage",
    "STAGE_NAMES",
    "edge_collar_in_subdivision",
    "load_poincare",
    "pipeline_5manifold",
]

POINCARE_F = (16, 106, 180, 90)
# degree of each vertex 1..16 in the 1-skeleton
POINCARE_VALENCES = (14, 14, 11, 14, 14, 11, 14, 12, 13, 15, 15, 14, 15, 15, 15, 6)

# pinned face counts per stage; None entries are not checked
_EXPECTED = {
    "poincare-sphere": POINCARE_F,
    "puncture": (15, None, None, 64),
    "thicken": (30, None, None, None, None),
    "cap-boundary": (None, None, None, None, None),
    "one-point-suspend": (32, 349, 1352, 2471, 2154, 718),
    "subdivide": (7076, 152540, 807888, 1696344, 1550880, 516960),
    "collar": (5013, 72300, 290944, 495912, 383136, 110880),
    "collar-boundary": (5010, 65520, 212000, 252480, 100992),
}

STAGE_NAMES = tuple(_EXPECTED)


class PipelineError(RuntimeError):
    """A construction stage produced face counts other than the pinned ones."""

    def __init__(self, index: int, name: str, message: str):
        super().__init__(f"stage {index} ({name}): {message}")
        self.index = index
        self.name = name


@dataclass
class PipelineStage:
    """One checked step: what ran, what it produced, what was required."""

    index: int
    name: str
    f_expected: tuple
    f_actual: tuple
    seconds: float
    complex: Optional[SimplicialComplex] = field(default=None, repr=False)
    notes: str = ""


def _checked(index: int, name: str, K: Optional[SimplicialComplex],
             seconds: float, notes: str = "",
             f_actual: Optional[tuple] = None) -> PipelineStage:
    expected = _EXPECTED[name]
    actual = tuple(f_actual) if f_actual is not None else tuple(K.f_vector())
    bad = []
    if len(actual) != len(expected):
        bad.append(f"dimension {len(actual) - 1}, expected {len(expected) - 1}")
    else:
        bad = [f"f_{k}={a}, expected {e}"
               for k, (e, a) in enumerate(zip(expected, actual))
               if e is not None and a != e]
    if bad:
        raise PipelineError(index, name, f"face counts off: {'; '.join(bad)}"
                                         f" (full f-vector {actual})")
    return PipelineStage(index, name, expected, actual, seconds, K, notes)


def load_poincare(source: Union[str, Path, None] = None) -> SimplicialComplex:
    """The packaged 16-vertex homology 3-sphere, fingerprint-checked.

    ``source`` overrides the packaged facet file.  Raises PipelineError
    if the face counts or the vertex valences are not the expected ones.
    """
    if source is None:
        with importlib.resources.as_file(
                importlib.resources.files("dmorse.data") / "poincare16.txt") as p:
            K = read_complex(p)
    else:
        K = read_complex(source)
    if tuple(K.f_vector()) != POINCARE_F:
        raise PipelineError(1, "poincare-sphere",
                            f"f-vector {tuple(K.f_vector())}, expected {POINCARE_F}")
    degree = {v: 0 for v in K.vertices}
    for a, b in K.faces(1):
        degree[a] += 1
        degree[b] += 1
    valences = tuple(degree[v] for v in sorted(degree))
    if valences != POINCARE_VALENCES:
        raise PipelineError(1, "poincare-sphere",
                            f"vertex valences {valences}, "
                            f"expected {POINCARE_VALENCES}")
    return K


def edge_collar_in_subdivision(K: SimplicialComplex, u: int, w: int) -> SimplicialComplex:
    """Closed stars, in sd(K), of the barycenters of {u}, {u,w} and {w}.

    Built directly from chains of K: a subdivision facet meets one of
    the three barycenters exactly when its chain starts at {u} or {w},
    so the subdivision itself is never materialized.
    """
    edge = (min(u, w), max(u, w))
    if edge not in K:
        raise ValueError(f"{edge} is not an edge of the complex")
    ids = barycenter_ids(K)
    flags = []
    for F in K.facets():
        for v in (u, w):
            if v not in F:
                continue
            rest = tuple(x for x in F if x != v)
            for perm in permutations(rest):
                cur = (v,)
                chain = [ids[cur]]
                for x in perm:
                    cur = tuple(sorted(cur + (x,)))
                    chain.append(ids[cur])
                flags.append(tuple(chain))
    return SimplicialComplex.from_facets(flags)


def pipeline_5manifold(source: Union[str, Path, None] = None, *,
                       materialize_sd: bool = False,
                       progress: Optional[Callable[[str], None]] = None,
                       ) -> "list[PipelineStage]":
    """Run all construction stages, returning one checked record per stage.

    The final two stages carry the interesting complexes: ``collar``
    (contractible, every 4-face free at the start of any deconstruction
    run) and ``collar-boundary``.  ``materialize_sd`` additionally
    builds the full 4.7M-face subdivision in stage 6 instead of only
    counting its faces; the collar never needs it.
    """
    stages: list = []

    def emit(stage: PipelineStage) -> PipelineStage:
        stages.append(stage)
        if progress is not None:
            progress(f"[{stage.index}/8] {stage.name}: "
                     f"f={stage.f_actual} ({stage.seconds:.1f}s)"
                     + (f" -- {stage.notes}" if stage.notes else ""))
        return stage

    t = perf_counter()
    P = load_poincare(source)
    emit(_checked(1, "poincare-sphere", P, perf_counter() - t,
                  notes="vertex valences verified"))

    t = perf_counter()
    B = P.delete_vertex(15).apply_map({16: 15})
    emit(_checked(2, "puncture", B, perf_counter() - t,
                  notes="open star of vertex 15 removed, 16 relabeled to 15"))

    t = perf_counter()
    T = product_with_interval(B)
    emit(_checked(3, "thicken", T, perf_counter() - t,
                  notes=f"{T.n_faces(4)} prisms over {B.n_faces(3)} tetrahedra"))

    t = perf_counter()
    rim = T.boundary_complex()
    L = union(T, cone(rim, apex=31))
    emit(_checked(4, "cap-boundary", L, perf_counter() - t,
                  notes=f"{L.n_faces(4)} facets = {T.n_faces(4)} prisms "
                        f"+ {rim.n_faces(3)} boundary cones"))

    t = perf_counter()
    S = one_point_suspension(L, 31)
    emit(_checked(5, "one-point-suspend", S, perf_counter() - t,
                  notes=f"chi={S.euler_characteristic}"))

    t = perf_counter()
    if materialize_sd:
        sd = barycentric_subdivision(S)
        emit(_checked(6, "subdivide", sd, perf_counter() - t))
    else:
        counts = subdivision_f_vector(S)
        emit(_checked(6, "subdivide", None, perf_counter() - t,
                      notes="face counts only; subdivision not materialized",
                      f_actual=tuple(counts)))

    t = perf_counter()
    ids = barycenter_ids(S)
    C = edge_collar_in_subdivision(S, 31, 32)
    emit(_checked(7, "collar", C, perf_counter() - t,
                  notes=f"stars of barycenters {ids[(31,)]}, {ids[(31, 32)]}, "
                        f"{ids[(32,)]}; chi={C.euler_characteristic}"))

    t = perf_counter()
    D = C.boundary_complex()
    emit(_checked(8, "collar-boundary", D, perf_counter() - t,
                  notes=f"chi={D.euler_characteristic}"))
    return stages
