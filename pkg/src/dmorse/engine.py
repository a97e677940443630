"""Level-wise randomized discrete Morse deconstruction engine.

A run eats a complex from the top dimension down: while some face is free
in the residual complex with its unique coface at the current top
dimension, collapse such a pair; otherwise remove one top-dimensional
face as critical; when the level is exhausted, move one dimension down.
Remaining vertices at level 0 all end up critical.

Three pick strategies are provided: ``random`` draws uniformly among the
eligible faces, while ``random-lex-first`` / ``random-lex-last`` first
relabel the vertices by a seeded uniform permutation and then always pick
the lexicographically smallest / largest eligible face (comparing sorted
relabeled vertex tuples).

The hot loop exists once, as :func:`_deconstruct_impl`; it is executed
either directly (reference path) or JIT-compiled.  Both paths consume the
same ``numpy.random.Generator`` stream, so they produce bit-identical
traces — the test suite asserts this.
"""

from __future__ import annotations

import bisect
import hashlib
from dataclasses import dataclass
from multiprocessing import get_context
from typing import Optional

import numpy as np
from numba import njit

from .complexes import Face, FVector, SimplicialComplex
from .constructions import barycentric_subdivision, subdivision_f_vector
from .verify import SizeLimitExceeded

__all__ = [
    "STRATEGIES",
    "Collapse",
    "Critical",
    "FaceIndex",
    "GrowthLevel",
    "GrowthReport",
    "MorseTrace",
    "MorseVector",
    "SpectrumReport",
    "check_monotone_trace",
    "child_seed",
    "run_strategy",
    "sd_growth_experiment",
    "spectrum",
]

STRATEGIES = ("random", "random-lex-first", "random-lex-last")


class MorseVector(tuple):
    """Counts (c_0, ..., c_d) of critical faces per dimension."""

    @property
    def total(self) -> int:
        return sum(self)

    @property
    def alternating_sum(self) -> int:
        return sum((-1) ** i * c for i, c in enumerate(self))


@dataclass(frozen=True, slots=True)
class Collapse:
    """Removal of a free face together with its unique coface."""

    free: Face
    coface: Face


@dataclass(frozen=True, slots=True)
class Critical:
    """Removal of a maximal face with no free face available below it."""

    face: Face


@dataclass(frozen=True)
class MorseTrace:
    """Ordered deconstruction log; implicitly a monotone Morse function.

    The face removed at step i receives the function value M - i, where M
    is the total face count, so collapse pairs share consecutive steps'
    values and the order encodes the full function.
    """

    events: tuple
    seed: int
    strategy: str
    permutation: Optional[dict]


@dataclass
class SpectrumReport:
    """Histogram of Morse vectors over seeded runs.

    ``histogram`` maps each observed vector to its count; ``min_vector``
    and ``max_vector`` order vectors by (total critical cells, entries).
    """

    strategy: str
    runs: int
    master_seed: int
    histogram: dict
    mean: float
    min_vector: MorseVector
    max_vector: MorseVector

    def count_of(self, vector) -> int:
        return self.histogram.get(MorseVector(vector), 0)

    def share(self, vector) -> float:
        return self.count_of(vector) / self.runs

    def to_json_dict(self) -> dict:
        items = sorted(self.histogram.items(),
                       key=lambda kv: (kv[0].total, kv[0]))
        return {
            "strategy": self.strategy,
            "runs": self.runs,
            "master_seed": self.master_seed,
            "histogram": [{"vector": list(v), "count": c} for v, c in items],
            "mean": self.mean,
            "min_vector": list(self.min_vector),
            "max_vector": list(self.max_vector),
        }


@dataclass
class GrowthLevel:
    level: int
    f_vector: FVector
    report: SpectrumReport


@dataclass
class GrowthReport:
    """Per-subdivision-level spectra; purely observational."""

    strategy: str
    runs: int
    master_seed: int
    levels: list


def child_seed(master_seed: int, i: int) -> int:
    """Platform-independent per-run seed derived from a master seed."""
    digest = hashlib.sha256(f"dmorse:{master_seed}:{i}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


# -- static face incidence index ----------------------------------------

class FaceIndex:
    """Read-only CSR incidence tables shared by all runs on one complex.

    Faces get global ids grouped by dimension (lex-sorted within each);
    ``bnd`` maps a face to its facets one dimension down, ``cof`` to its
    cofacets one dimension up.
    """

    __slots__ = ("n", "dim", "dim_start", "bnd_indptr", "bnd_ids",
                 "cof_indptr", "cof_ids", "cnt0", "vertex_labels",
                 "pos_verts", "faces_by_dim")

    def __init__(self, K: SimplicialComplex):
        if K.dim < 0:
            raise ValueError("cannot index an empty complex")
        D = K.dim
        counts = [K.n_faces(k) for k in range(D + 1)]
        dim_start = np.zeros(D + 2, np.int64)
        np.cumsum(counts, out=dim_start[1:])
        n = int(dim_start[-1])
        faces_by_dim = tuple(K.faces(k) for k in range(D + 1))

        bnd_indptr = np.zeros(n + 1, np.int64)
        total_bnd = sum((k + 1) * counts[k] for k in range(1, D + 1))
        bnd_ids = np.empty(total_bnd, np.int32)
        pos = 0
        prev_ids = {f: i for i, f in enumerate(faces_by_dim[0])}
        for k in range(1, D + 1):
            base = int(dim_start[k])
            cur_ids = {}
            prev_base = int(dim_start[k - 1])
            for i, f in enumerate(faces_by_dim[k]):
                cur_ids[f] = i
                gid = base + i
                for j in range(k + 1):
                    sub = f[:j] + f[j + 1:]
                    bnd_ids[pos] = prev_base + prev_ids[sub]
                    pos += 1
                bnd_indptr[gid + 1] = pos
            prev_ids = cur_ids
        # dim-0 faces have empty ranges; fix the running prefix
        bnd_indptr = np.maximum.accumulate(bnd_indptr)

        owners = np.repeat(np.arange(n, dtype=np.int32),
                           np.diff(bnd_indptr))
        order = np.argsort(bnd_ids, kind="stable")
        cof_ids = owners[order]
        cnt0 = np.bincount(bnd_ids, minlength=n).astype(np.int32)
        cof_indptr = np.zeros(n + 1, np.int64)
        np.cumsum(cnt0, out=cof_indptr[1:])

        self.n = n
        self.dim = D
        self.dim_start = dim_start
        self.bnd_indptr = bnd_indptr
        self.bnd_ids = bnd_ids
        self.cof_indptr = cof_indptr
        self.cof_ids = cof_ids
        self.cnt0 = cnt0
        self.vertex_labels = np.array([v for (v,) in faces_by_dim[0]],
                                      dtype=np.int64)
        self.pos_verts = tuple(
            np.searchsorted(self.vertex_labels,
                            np.array(faces_by_dim[k], dtype=np.int64)
                            .reshape(counts[k], k + 1)).astype(np.int32)
            for k in range(D + 1))
        self.faces_by_dim = faces_by_dim

    def face_of(self, gid: int) -> Face:
        d = int(np.searchsorted(self.dim_start, gid, side="right")) - 1
        return self.faces_by_dim[d][gid - int(self.dim_start[d])]

    def face_id(self, face) -> int:
        f = tuple(sorted(face))
        d = len(f) - 1
        if not (0 <= d <= self.dim):
            raise ValueError(f"face {f} is not in the complex")
        level = self.faces_by_dim[d]
        i = bisect.bisect_left(level, f)
        if i == len(level) or level[i] != f:
            raise ValueError(f"face {f} is not in the complex")
        return int(self.dim_start[d]) + i


# -- the deconstruction loop (single source, two compilations) ----------

def _deconstruct_impl(rng, mode, dim_start, bnd_indptr, bnd_ids,
                      cof_indptr, cof_ids, cnt0, key, sorted_ids):
    n = cnt0.shape[0]
    D = dim_start.shape[0] - 2
    cnt = cnt0.copy()
    alive = np.ones(n, np.uint8)
    pool_ids = np.empty(n, np.int32)
    pool_keys = np.empty(n, np.int64)
    pool_size = np.zeros(D + 1, np.int64)
    ev_face = np.empty(n, np.int32)
    ev_pair = np.empty(n, np.int32)
    crit = np.zeros(D + 1, np.int64)

    def _push(t, d):
        base = dim_start[d]
        s = pool_size[d]
        if mode == 0:
            pool_ids[base + s] = t
        else:
            kt = key[t]
            i = s
            while i > 0:
                par = (i - 1) >> 1
                if pool_keys[base + par] <= kt:
                    break
                pool_keys[base + i] = pool_keys[base + par]
                pool_ids[base + i] = pool_ids[base + par]
                i = par
            pool_keys[base + i] = kt
            pool_ids[base + i] = t
        pool_size[d] = s + 1

    def _remove(gone, gd):
        alive[gone] = 0
        if gd > 0:
            for p in range(bnd_indptr[gone], bnd_indptr[gone + 1]):
                t = bnd_ids[p]
                if alive[t] != 0:
                    c = cnt[t] - 1
                    cnt[t] = c
                    if c == 1:
                        _push(t, gd - 1)

    maxw = 0
    for d in range(D + 1):
        w = dim_start[d + 1] - dim_start[d]
        if w > maxw:
            maxw = w
    cand = np.empty(maxw, np.int32)

    for d in range(D + 1):
        for idx in range(dim_start[d], dim_start[d + 1]):
            if cnt[idx] == 1:
                _push(idx, d)

    nev = 0
    for k in range(D, -1, -1):
        kbase = dim_start[k]
        width = dim_start[k + 1] - kbase
        m = 0
        ptr = 0
        if mode == 0:
            for idx in range(kbase, kbase + width):
                if alive[idx] != 0:
                    cand[m] = idx
                    m += 1
        while True:
            sigma = -1
            if k > 0:
                d = k - 1
                base = dim_start[d]
                s = pool_size[d]
                if mode == 0:
                    while s > 0:
                        j = rng.integers(0, s)
                        cid = pool_ids[base + j]
                        s -= 1
                        pool_ids[base + j] = pool_ids[base + s]
                        if alive[cid] != 0 and cnt[cid] == 1:
                            sigma = cid
                            break
                else:
                    while s > 0:
                        cid = pool_ids[base]
                        s -= 1
                        lk = pool_keys[base + s]
                        li = pool_ids[base + s]
                        if s > 0:
                            i = 0
                            while True:
                                ch = 2 * i + 1
                                if ch >= s:
                                    break
                                if (ch + 1 < s
                                        and pool_keys[base + ch + 1]
                                        < pool_keys[base + ch]):
                                    ch += 1
                                if pool_keys[base + ch] >= lk:
                                    break
                                pool_keys[base + i] = pool_keys[base + ch]
                                pool_ids[base + i] = pool_ids[base + ch]
                                i = ch
                            pool_keys[base + i] = lk
                            pool_ids[base + i] = li
                        if alive[cid] != 0 and cnt[cid] == 1:
                            sigma = cid
                            break
                pool_size[d] = s
            if sigma >= 0:
                tau = -1
                for p in range(cof_indptr[sigma], cof_indptr[sigma + 1]):
                    c2 = cof_ids[p]
                    if alive[c2] != 0:
                        tau = c2
                        break
                _remove(sigma, k - 1)
                _remove(tau, k)
                ev_face[nev] = sigma
                ev_pair[nev] = tau
                nev += 1
                continue
            delta = -1
            if mode == 0:
                while m > 0:
                    j = rng.integers(0, m)
                    cid = cand[j]
                    m -= 1
                    cand[j] = cand[m]
                    if alive[cid] != 0:
                        delta = cid
                        break
            else:
                while ptr < width:
                    cid = sorted_ids[kbase + ptr]
                    ptr += 1
                    if alive[cid] != 0:
                        delta = cid
                        break
            if delta < 0:
                break
            _remove(delta, k)
            ev_face[nev] = delta
            ev_pair[nev] = -1
            crit[k] += 1
            nev += 1
    return ev_face[:nev], ev_pair[:nev], crit


_deconstruct_py = _deconstruct_impl
_deconstruct_nb = njit(cache=True)(_deconstruct_impl)

_DUMMY_KEY = np.zeros(1, np.int64)
_DUMMY_SORTED = np.zeros(1, np.int32)


def _lex_tables(index: FaceIndex, perm: np.ndarray, last: bool):
    """Per-face lex ranks and per-dimension pick orders under a relabeling."""
    key = np.empty(index.n, np.int64)
    sorted_ids = np.empty(index.n, np.int32)
    for d in range(index.dim + 1):
        base = int(index.dim_start[d])
        end = int(index.dim_start[d + 1])
        relabeled = perm[index.pos_verts[d]]
        relabeled.sort(axis=1)
        order = np.lexsort(tuple(relabeled[:, j]
                                 for j in range(d, -1, -1)))
        ranks = np.empty(end - base, np.int64)
        ranks[order] = np.arange(end - base)
        if last:
            key[base:end] = -ranks
            sorted_ids[base:end] = (base + order[::-1]).astype(np.int32)
        else:
            key[base:end] = ranks
            sorted_ids[base:end] = (base + order).astype(np.int32)
    return key, sorted_ids


def _resolve_engine(engine: str):
    if engine == "python":
        return _deconstruct_py
    if engine in ("auto", "numba"):
        return _deconstruct_nb
    raise ValueError(f"unknown engine {engine!r}")


def _run_raw(index: FaceIndex, strategy: str, seed: int, engine: str):
    """One deconstruction; returns (ev_face, ev_pair, crit, perm)."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; "
                         f"expected one of {STRATEGIES}")
    rng = np.random.default_rng(int(seed))
    fn = _resolve_engine(engine)
    if strategy == "random":
        ev_face, ev_pair, crit = fn(
            rng, 0, index.dim_start, index.bnd_indptr, index.bnd_ids,
            index.cof_indptr, index.cof_ids, index.cnt0,
            _DUMMY_KEY, _DUMMY_SORTED)
        return ev_face, ev_pair, crit, None
    perm = rng.permutation(index.vertex_labels.size)
    key, sorted_ids = _lex_tables(index, perm,
                                  last=strategy == "random-lex-last")
    ev_face, ev_pair, crit = fn(
        rng, 1, index.dim_start, index.bnd_indptr, index.bnd_ids,
        index.cof_indptr, index.cof_ids, index.cnt0, key, sorted_ids)
    return ev_face, ev_pair, crit, perm


def run_strategy(K: SimplicialComplex, strategy: str, seed: int,
                 index: Optional[FaceIndex] = None,
                 engine: str = "auto"):
    """One seeded deconstruction of K; returns (MorseTrace, MorseVector).

    Deterministic given (strategy, seed): the same pair always yields the
    same trace, independent of engine and worker scheduling.
    """
    if index is None:
        index = FaceIndex(K)
    ev_face, ev_pair, crit, perm = _run_raw(index, strategy, seed, engine)
    events = []
    face_of = index.face_of
    for gid, pid in zip(ev_face.tolist(), ev_pair.tolist()):
        if pid < 0:
            events.append(Critical(face_of(gid)))
        else:
            events.append(Collapse(face_of(gid), face_of(pid)))
    permutation = None
    if perm is not None:
        permutation = {int(label): int(perm[i])
                       for i, label in enumerate(index.vertex_labels)}
    trace = MorseTrace(events=tuple(events), seed=int(seed),
                       strategy=strategy, permutation=permutation)
    return trace, MorseVector(int(c) for c in crit)


# -- spectra -------------------------------------------------------------

_FORK_STATE = None


def _fork_worker(seeds):
    index, strategy, engine = _FORK_STATE
    out = []
    for seed in seeds:
        crit = _run_raw(index, strategy, seed, engine)[2]
        out.append(tuple(int(c) for c in crit))
    return out


def spectrum(K: SimplicialComplex, strategy: str, runs: int,
             master_seed: int = 0, workers: int = 1,
             index: Optional[FaceIndex] = None,
             engine: str = "auto") -> SpectrumReport:
    """Histogram of Morse vectors over ``runs`` seeded deconstructions.

    Run i uses ``child_seed(master_seed, i)``, so the outcome multiset is
    independent of the worker count.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    if index is None:
        index = FaceIndex(K)
    seeds = [child_seed(master_seed, i) for i in range(runs)]
    if workers <= 1:
        vectors = _fork_worker_inline(index, strategy, engine, seeds)
    else:
        global _FORK_STATE
        _FORK_STATE = (index, strategy, engine)
        try:
            step = max(1, -(-len(seeds) // (workers * 4)))
            chunks = [seeds[i:i + step] for i in range(0, len(seeds), step)]
            ctx = get_context("fork")
            with ctx.Pool(workers) as pool:
                results = pool.map(_fork_worker, chunks)
        finally:
            _FORK_STATE = None
        vectors = [v for chunk in results for v in chunk]
    histogram = {}
    total_sum = 0
    for v in vectors:
        mv = MorseVector(v)
        histogram[mv] = histogram.get(mv, 0) + 1
        total_sum += mv.total
    ordering = sorted(histogram, key=lambda mv: (mv.total, mv))
    return SpectrumReport(
        strategy=strategy, runs=runs, master_seed=int(master_seed),
        histogram=histogram, mean=total_sum / runs,
        min_vector=ordering[0], max_vector=ordering[-1])


def _fork_worker_inline(index, strategy, engine, seeds):
    out = []
    for seed in seeds:
        crit = _run_raw(index, strategy, seed, engine)[2]
        out.append(tuple(int(c) for c in crit))
    return out


# -- trace verification ---------------------------------------------------

def check_monotone_trace(K: SimplicialComplex, trace: MorseTrace,
                         index: Optional[FaceIndex] = None) -> list:
    """Replay a trace against K; returns violation messages ([] = ok).

    Verifies that the events partition the face set, that every collapse
    pair is a genuine free pair in the residual complex at its moment,
    that the per-event top dimension never increases, and that no face is
    declared critical while a free face one dimension down is available.
    Raises ValueError when the trace references unknown faces.
    """
    if index is None:
        index = FaceIndex(K)
    n = index.n
    D = index.dim
    cnt = index.cnt0.copy()
    alive = np.ones(n, np.uint8)
    nfree = np.zeros(D + 1, np.int64)
    dim_of = np.empty(n, np.int64)
    for d in range(D + 1):
        dim_of[index.dim_start[d]:index.dim_start[d + 1]] = d
        span = slice(int(index.dim_start[d]), int(index.dim_start[d + 1]))
        nfree[d] = int(np.count_nonzero(cnt[span] == 1))
    violations = []

    def _find_free(d):
        for gid in range(int(index.dim_start[d]),
                         int(index.dim_start[d + 1])):
            if alive[gid] and cnt[gid] == 1:
                for p in range(index.cof_indptr[gid],
                               index.cof_indptr[gid + 1]):
                    c2 = index.cof_ids[p]
                    if alive[c2]:
                        if cnt[c2] == 0:
                            return gid
                        break
        return -1

    def _kill(gid):
        d = int(dim_of[gid])
        if cnt[gid] == 1:
            nfree[d] -= 1
        alive[gid] = 0
        if d > 0:
            for p in range(index.bnd_indptr[gid],
                           index.bnd_indptr[gid + 1]):
                t = index.bnd_ids[p]
                if alive[t]:
                    cnt[t] -= 1
                    if cnt[t] == 1:
                        nfree[dim_of[t]] += 1
                    elif cnt[t] == 0:
                        nfree[dim_of[t]] -= 1

    level = D
    removed = 0
    for e, event in enumerate(trace.events):
        if isinstance(event, Collapse):
            fid = index.face_id(event.free)
            tid = index.face_id(event.coface)
            top = int(dim_of[tid])
            ok = True
            if dim_of[fid] != top - 1:
                violations.append(
                    f"event {e}: collapse pair {event.free} -> "
                    f"{event.coface} is not a codimension-1 pair")
                ok = False
            if not alive[fid] or not alive[tid]:
                violations.append(
                    f"event {e}: collapse touches already-removed faces "
                    f"{event.free} -> {event.coface}")
                ok = False
            if ok:
                in_bnd = False
                for p in range(index.bnd_indptr[tid],
                               index.bnd_indptr[tid + 1]):
                    if index.bnd_ids[p] == fid:
                        in_bnd = True
                        break
                if not in_bnd:
                    violations.append(
                        f"event {e}: {event.free} is not a facet of "
                        f"{event.coface}")
                    ok = False
            if ok and cnt[fid] != 1:
                violations.append(
                    f"event {e}: face {event.free} has {int(cnt[fid])} "
                    f"cofacets, so it is not free")
            if ok and cnt[tid] != 0:
                violations.append(
                    f"event {e}: coface {event.coface} is not maximal "
                    f"at its collapse")
            if top > level:
                violations.append(
                    f"event {e}: deconstruction level increases from "
                    f"{level} to {top}")
            level = min(level, top)
            if alive[fid]:
                _kill(fid)
            if alive[tid]:
                _kill(tid)
            removed += 2
        elif isinstance(event, Critical):
            fid = index.face_id(event.face)
            top = int(dim_of[fid])
            if not alive[fid]:
                violations.append(
                    f"event {e}: critical face {event.face} was already "
                    "removed")
            elif cnt[fid] != 0:
                violations.append(
                    f"event {e}: critical face {event.face} is not "
                    "maximal")
            if top > level:
                violations.append(
                    f"event {e}: deconstruction level increases from "
                    f"{level} to {top}")
            level = min(level, top)
            if top >= 1 and nfree[top - 1] > 0:
                free_gid = _find_free(top - 1)
                if free_gid >= 0:
                    violations.append(
                        f"event {e}: face {event.face} declared critical "
                        f"while free face "
                        f"{index.face_of(free_gid)} is available")
            if alive[fid]:
                _kill(fid)
            removed += 1
        else:
            raise ValueError(f"unknown event type {type(event).__name__}")
    if removed != n or alive.any():
        missing = int(np.count_nonzero(alive))
        violations.append(
            f"trace does not partition the face set: {missing} faces "
            f"never removed, {removed} removal events for {n} faces")
    return violations


# -- barycentric growth probe ---------------------------------------------

def sd_growth_experiment(K: SimplicialComplex, max_level: int,
                         strategy: str = "random", runs: int = 20,
                         master_seed: int = 0, workers: int = 1,
                         size_limit: int = 300_000,
                         engine: str = "auto") -> GrowthReport:
    """Spectra of iterated barycentric subdivisions; report-only.

    Raises :class:`SizeLimitExceeded` before materializing any level whose
    predicted face count exceeds ``size_limit``.
    """
    if len(K) > size_limit:
        raise SizeLimitExceeded(
            f"level 0 already has {len(K)} faces (> {size_limit})")
    levels = []
    current = K
    for level in range(max_level + 1):
        report = spectrum(current, strategy, runs,
                          master_seed=child_seed(master_seed, level),
                          workers=workers, engine=engine)
        levels.append(GrowthLevel(level=level,
                                  f_vector=current.f_vector(),
                                  report=report))
        if level == max_level:
            break
        predicted = sum(subdivision_f_vector(current))
        if predicted > size_limit:
            raise SizeLimitExceeded(
                f"subdividing level {level} would give {predicted} faces "
                f"(> {size_limit})")
        current = barycentric_subdivision(current)
    return GrowthReport(strategy=strategy, runs=runs,
                        master_seed=int(master_seed), levels=levels)
