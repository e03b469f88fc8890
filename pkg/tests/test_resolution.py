import copy
import json

import pytest

from conftest import FIXTURES
from eqpoincare.resolution import (ResolutionError, load_resolution, multiplicity_matrix, n_value, omega_vector,
                                   require_valid, resolution_from_json, validate)

RES = FIXTURES / "resolutions"


def raw(name):
    return json.loads((RES / f"{name}.json").read_text())


def build(data):
    return resolution_from_json(data, RES)


def graph_only(self_int, edges):
    names = [f"E{i}" for i in range(len(self_int))]
    return {"group": "../groups/trivial.json", "vertices": names,
            "self_int": dict(zip(names, self_int)), "edges": edges,
            "valuations": [{"i": 1, "component": "E0"}], "strata": []}


def test_single_blowup():
    assert multiplicity_matrix(build(graph_only([-1], [])).graph).rows() == [[1]]


def test_chain():
    m = multiplicity_matrix(build(graph_only([-2, -1], [["E0", "E1"]])).graph)
    assert m.rows() == [[1, 1], [1, 2]]
    assert m["E1", "E1"] == 2


def test_divisorial_fixture_matrix():
    res = load_resolution(RES / "z2_reflection_divisorial.json")
    assert multiplicity_matrix(res.graph).rows() == [[1, 1, 1], [1, 2, 1], [1, 1, 2]]


@pytest.mark.parametrize("self_int,edges,match", [
    ([-2], [], "not integral"),
    ([-1, -1], [["E0", "E1"]], "singular"),
    ([-1, -1], [], "not positive"),
])
def test_bad_graphs(self_int, edges, match):
    with pytest.raises(ResolutionError, match=match):
        multiplicity_matrix(build(graph_only(self_int, edges)).graph)


def test_omega_and_n_on_divisorial_fixture():
    res = load_resolution(RES / "z2_reflection_divisorial.json")
    assert omega_vector(res, res.stratum("E0:generic")) == (2,)
    assert omega_vector(res, res.stratum("E1")) == (3,)
    assert n_value(res, res.stratum("E0:generic")) == 1
    assert n_value(res, res.stratum("E1")) == 2


def test_omega_is_invariant_along_orbits():
    data = raw("z2_reflection_divisorial")
    data["strata"][-1]["id"], data["strata"][-1]["component"] = "E2", "E2"
    moved = build(data)
    base = load_resolution(RES / "z2_reflection_divisorial.json")
    assert omega_vector(moved, moved.stratum("E2")) == omega_vector(base, base.stratum("E1"))


@pytest.mark.parametrize("name", sorted(p.stem for p in RES.glob("*.json")))
def test_fixtures_validate(name):
    rep = validate(load_resolution(RES / f"{name}.json"))
    assert rep.ok, rep.failures
    assert "stratum Euler characteristics are declared, unverified" in rep.notes


def test_isotropy_must_stabilize_component():
    data = raw("z2_reflection_divisorial")
    data["strata"][-1]["H"] = ["e", "g"]
    rep = validate(build(data))
    assert any("stratum E1: H does not stabilize component E1" in f for f in rep.failures)
    with pytest.raises(ResolutionError):
        require_valid(build(data))


def test_slice_isotropy_must_lie_in_isotropy():
    data = raw("z2_reflection_divisorial")
    data["strata"][2]["Hhat"] = ["e", "g"]
    assert any("Hhat is not a subgroup of H" in f for f in validate(build(data)).failures)


def test_asymmetric_intersection_data():
    data = graph_only([-2, -1], [])
    data["intersection"] = [[0, 1], [0, 0]]
    assert any("not symmetric" in f for f in validate(build(data)).failures)


def test_self_intersections_must_be_invariant():
    data = raw("z2_reflection_divisorial")
    data["self_int"]["E2"] = -2
    assert any("not invariant" in f for f in validate(build(data)).failures)


def test_euler_characteristic_mismatch():
    data = raw("z2_reflection_divisorial")
    data["smooth_chi"]["E0"] = 5
    assert any(f.startswith("euler:") for f in validate(build(data)).failures)


def test_valuation_indices():
    data = raw("z2_scalar")
    data["valuations"][0]["i"] = 3
    assert any(f.startswith("valuations:") for f in validate(build(data)).failures)


def test_action_must_be_a_homomorphism():
    data = graph_only([-3, -1, -1], [["E0", "E1"], ["E0", "E2"]])
    data["group"] = "../groups/z3.json"
    data["action"] = {"g": ["E0", "E2", "E1"]}
    assert any("not a homomorphism" in f for f in validate(build(data)).failures)


def test_action_must_preserve_graph():
    data = graph_only([-2, -1, -1], [["E0", "E1"], ["E0", "E2"]])
    data["group"] = "../groups/z2.json"
    data["action"] = {"g": ["E1", "E0", "E2"]}
    assert any("not invariant" in f for f in validate(build(data)).failures)


def test_character_off_isotropy_is_rejected():
    data = raw("z2_reflection_divisorial")
    data["strata"][2]["alpha"] = {"g": "1/2"}
    with pytest.raises(ResolutionError, match="alpha is defined off H"):
        build(data)


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("vertices"),
    lambda d: d.update(group="../groups/missing.json"),
    lambda d: d.update(edges=[["E0", "E9"]]),
    lambda d: d["strata"][0].update(H=["nope"]),
])
def test_malformed_input(mutate):
    data = copy.deepcopy(raw("z2_reflection_divisorial"))
    mutate(data)
    with pytest.raises(ResolutionError):
        build(data)
