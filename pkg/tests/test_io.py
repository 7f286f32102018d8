import json
from importlib import resources

import numpy as np
import pytest

from bisimp import fixtures, io
from bisimp.bisimplicial import IdentityViolation, verify_bisimplicial
from bisimp.crossed import (
    check_crossed_module, check_crossed_square, check_two_crossed_module, crossed_module_isomorphism,
    crossed_square_isomorphism, two_crossed_isomorphism,
)
from bisimp.fingroup import HomomorphismInvalid, is_isomorphic
from bisimp.surjections import ParseError

DATA = resources.files("bisimp") / "data"


def roundtrip(obj):
    return io.from_json(json.loads(json.dumps(io.to_json(obj))))


def test_group_roundtrip(s3):
    back = io.group_from_json(io.group_to_json(s3))
    assert back.order == 6
    assert {tuple(p) for p in back.perms.tolist()} == {tuple(p) for p in s3.perms.tolist()}


def test_grid_roundtrip_is_identity(any_grid):
    back = roundtrip(any_grid)
    assert back.truncation == any_grid.truncation
    for key, G in any_grid.levels.items():
        assert np.array_equal(np.sort(G.perms, axis=0), np.sort(back.levels[key].perms, axis=0))
    for name in ("dh", "sh", "dv", "sv"):
        a, b = getattr(any_grid, name), getattr(back, name)
        assert a.keys() == b.keys()
        for k in a:
            src, dst = any_grid.levels[k[:2]], a[k].codomain
            bsrc, bdst = back.levels[k[:2]], b[k].codomain
            lhs = dst.perms[a[k].images]
            rhs = bdst.perms[b[k].images[bsrc.lookup(src.perms)]]
            assert np.array_equal(lhs, rhs)
    assert back.moore_orders() == any_grid.moore_orders()


def test_simplicial_roundtrip(nerve2):
    back = roundtrip(nerve2)
    assert back.moore_orders() == nerve2.moore_orders()


def test_crossed_roundtrips(c3s3):
    x = roundtrip(c3s3)
    assert check_crossed_module(x).ok
    assert crossed_module_isomorphism(x, c3s3) is not None
    sq = roundtrip(fixtures.d4_square())
    assert check_crossed_square(sq).ok
    assert crossed_square_isomorphism(sq, fixtures.d4_square()) is not None
    cone = roundtrip(fixtures.d4_cone())
    assert check_two_crossed_module(cone).ok
    assert two_crossed_isomorphism(cone, fixtures.d4_cone()) is not None


def test_mutations_survive_serialization():
    x = roundtrip(fixtures.trivial_action_xmod())
    assert not check_crossed_module(x).ok
    sq = roundtrip(fixtures.trivial_h_square())
    assert not check_crossed_square(sq).ok


def test_shipped_d4_grid_loads_and_passes():
    g = io.from_grid_spec(DATA / "d4_grid.json")
    assert verify_bisimplicial(g).ok
    assert g.moore_orders() == fixtures.d4_grid().moore_orders()


def test_shipped_structures_load():
    x = io.load(DATA / "c3_s3_xmod.json")
    assert check_crossed_module(x).ok
    sq = io.load(DATA / "d4_xsq.json")
    assert check_crossed_square(sq).ok
    assert is_isomorphic(sq.P, fixtures.d4()[0])


def test_broken_grid_refused_on_load():
    with pytest.raises(IdentityViolation) as info:
        io.from_grid_spec(DATA / "broken_face_grid.json")
    assert info.value.report.failures[0].witness is not None
    g = io.load(DATA / "broken_face_grid.json", verify=False)
    assert not verify_bisimplicial(g).ok


def test_missing_degeneracy_is_a_parse_error(tmp_path):
    doc = io.to_json(fixtures.constant_grid())
    del doc["sv"]["1,0,0"]
    path = tmp_path / "grid.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(ParseError, match="1,0,0"):
        io.load(path)


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("kind"),
    lambda d: d.update(kind="tricrossed"),
    lambda d: d["levels"].pop("0,0"),
    lambda d: d["levels"]["0,0"].update(degree="three"),
    lambda d: d["dh"]["1,0,0"].update(gen_images=[]),
])
def test_malformed_documents(mutate):
    doc = io.to_json(fixtures.constant_grid())
    mutate(doc)
    with pytest.raises(ParseError):
        io.from_json(doc)


def test_invalid_json_text(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ParseError):
        io.load(path)


def test_non_homomorphic_map_rejected():
    doc = io.to_json(fixtures.constant_grid())
    # a transposition generator cannot go to a 3-cycle
    doc["dh"]["1,0,0"]["gen_images"] = [[1, 2, 0]] * len(doc["dh"]["1,0,0"]["gen_images"])
    with pytest.raises(HomomorphismInvalid):
        io.from_json(doc)


def test_dump_and_load(tmp_path, c3s3):
    path = tmp_path / "x.json"
    io.dump(c3s3, path)
    assert json.loads(path.read_text())["kind"] == "crossed_module"
    assert crossed_module_isomorphism(io.load(path), c3s3) is not None
