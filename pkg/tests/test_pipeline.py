import pytest

from dmorse import (
    PipelineError,
    SimplicialComplex,
    edge_collar_in_subdivision,
    load_poincare,
    pipeline_5manifold,
    write_facets,
)
from dmorse.constructions import (
    barycenter_ids,
    barycentric_subdivision,
    simplex_boundary,
    simplicial_neighborhood,
)
from dmorse.pipeline import STAGE_NAMES

PINNED = {
    "poincare-sphere": (16, 106, 180, 90),
    "one-point-suspend": (32, 349, 1352, 2471, 2154, 718),
    "subdivide": (7076, 152540, 807888, 1696344, 1550880, 516960),
    "collar": (5013, 72300, 290944, 495912, 383136, 110880),
    "collar-boundary": (5010, 65520, 212000, 252480, 100992),
}


def test_stage_roster(pipeline_stages):
    assert tuple(s.name for s in pipeline_stages) == STAGE_NAMES
    assert [s.index for s in pipeline_stages] == list(range(1, 9))
    for s in pipeline_stages:
        assert s.seconds >= 0.0
        for want, got in zip(s.f_expected, s.f_actual):
            if want is not None:
                assert got == want


def test_pinned_f_vectors(pipeline_stages):
    by_name = {s.name: s for s in pipeline_stages}
    for name, f in PINNED.items():
        assert tuple(by_name[name].f_actual) == f
    assert tuple(by_name["puncture"].f_actual) == (15, 91, 141, 64)
    assert tuple(by_name["thicken"].f_actual) == (30, 288, 746, 743, 256)
    assert tuple(by_name["cap-boundary"].f_actual) == (31, 318, 982, 1155, 462)


def test_euler_characteristics_along_the_way(pipeline_stages):
    by_name = {s.name: s for s in pipeline_stages}

    def chi(name):
        f = by_name[name].f_actual
        return sum((-1) ** i * c for i, c in enumerate(f))

    assert chi("poincare-sphere") == 0
    assert chi("puncture") == 1
    assert chi("thicken") == 1
    assert chi("cap-boundary") == 2
    assert chi("one-point-suspend") == 0
    assert chi("subdivide") == 0
    assert chi("collar") == 1
    assert chi("collar-boundary") == 2


def test_materialization_policy(pipeline_stages):
    for s in pipeline_stages:
        if s.name == "subdivide":
            assert s.complex is None
        else:
            assert s.complex is not None
            assert tuple(s.complex.f_vector()) == tuple(s.f_actual)


def test_progress_messages(pipeline_progress):
    assert len(pipeline_progress) == 8
    assert pipeline_progress[0].startswith("[1/8] poincare-sphere")
    assert pipeline_progress[-1].startswith("[8/8] collar-boundary")


def test_collar_keeps_the_singular_path(collar):
    # barycenters of {31}, {31,32} and {32} under the subdivision labeling
    assert (31,) in collar and (32,) in collar and (381,) in collar
    assert (31, 381) in collar and (32, 381) in collar
    assert (31, 32) not in collar


def test_load_poincare_roundtrip(tmp_path, poincare):
    assert tuple(poincare.f_vector()) == (16, 106, 180, 90)
    copy = tmp_path / "copy.fac"
    write_facets(copy, poincare)
    again = load_poincare(copy)
    assert again._faces == poincare._faces


def test_load_poincare_rejects_wrong_f_vector(tmp_path, poincare):
    broken = tmp_path / "broken.fac"
    write_facets(broken, poincare.delete_vertex(16))
    with pytest.raises(PipelineError) as err:
        load_poincare(broken)
    assert err.value.index == 1
    assert err.value.name == "poincare-sphere"


def test_load_poincare_rejects_wrong_valences(tmp_path, poincare):
    # swapping labels 1 and 3 keeps the f-vector but moves a degree-11
    # vertex to a slot that must have degree 14
    swapped = poincare.apply_map({1: 3, 3: 1})
    assert tuple(swapped.f_vector()) == (16, 106, 180, 90)
    path = tmp_path / "swapped.fac"
    write_facets(path, swapped)
    with pytest.raises(PipelineError, match="valence"):
        load_poincare(path)


def test_pipeline_fails_fast_on_bad_source(tmp_path, poincare):
    bad = tmp_path / "bad.fac"
    write_facets(bad, poincare.delete_vertex(16))
    with pytest.raises(PipelineError):
        pipeline_5manifold(source=bad)


def test_collar_matches_neighborhood_of_subdivided_path():
    K = simplex_boundary(3)
    ids = barycenter_ids(K)
    u, w = 1, 2
    path = SimplicialComplex.from_facets(
        [(ids[(u,)], ids[(u, w)]), (ids[(u, w)], ids[(w,)])])
    expected = simplicial_neighborhood(barycentric_subdivision(K), path)
    got = edge_collar_in_subdivision(K, u, w)
    assert got._faces == expected._faces


def test_collar_requires_an_edge():
    K = SimplicialComplex.from_facets([(1, 2, 3), (4, 5)])
    with pytest.raises(ValueError):
        edge_collar_in_subdivision(K, 1, 4)
    assert edge_collar_in_subdivision(K, 2, 1).dim == 2
