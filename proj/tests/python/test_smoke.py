import json
import pathlib

import pytest

import sitekit

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture(scope="module")
def arrow():
    return sitekit.Category.build("arr", ["a", "b"], [("f", "a", "b")])


@pytest.fixture(scope="module")
def z2():
    return sitekit.Category.build(
        "z2", ["x"], [("s", "x", "x")], [("s", "s", "id_x")]
    )


def test_category_basics(arrow):
    assert arrow.objects == ["a", "b"]
    assert "f" in arrow.arrows
    assert arrow.source("f") == "a"
    assert arrow.target("f") == "b"
    assert arrow.compose("id_b", "f") == "f"
    assert arrow.right_ore()
    assert arrow.amalgamation() and arrow.joint_embedding()


def test_bad_category_raises():
    with pytest.raises(sitekit.SitekitError):
        sitekit.Category.build("bad", ["x"], [("f", "x", "x")])


def test_topology_lattice(arrow):
    lattice = sitekit.enumerate_topologies(arrow)
    assert len(lattice) == 4
    triv = sitekit.canonical_topology(arrow, "trivial")
    gen = sitekit.generate_topology(arrow, [("b", ["f"])])
    assert sitekit.topology_leq(triv, gen)
    assert sitekit.validate_topology(arrow, gen)
    assert sitekit.lattice_op(arrow, triv, gen, "join") == gen
    assert sitekit.covers(arrow, gen)["b"] == [["f"], ["id_b", "f"]]
    assert len(sitekit.subtoposes(arrow, gen)) == 2


def test_sheaves_and_invariants(arrow):
    gen = sitekit.generate_topology(arrow, [("b", ["f"])])
    ya = sitekit.representable(arrow, 0)
    yb = sitekit.representable(arrow, 1)
    assert not sitekit.check_sheaf(arrow, gen, ya)["is_sheaf"]
    assert sitekit.check_sheaf(arrow, gen, yb)["is_sheaf"]
    assert sitekit.subterminal_count(arrow, gen) == 2

    triv = sitekit.canonical_topology(arrow, "trivial")
    inv = sitekit.site_invariants(arrow, triv)
    assert not inv["boolean_site"]
    obj, members = inv["boolean_witness"]
    assert obj == "b" and members == ["f"]


def test_models(z2):
    assert sitekit.check_flatness(z2, sitekit.corepresentable(z2, 0))["flat"]
    triv = sitekit.canonical_topology(z2, "trivial")
    models = sitekit.enumerate_models(z2, triv, 2)
    assert len(models) == 1
    assert models[0]["action"]["s"] == [1, 0]


def test_workspace_roundtrip():
    text = (ROOT / "workspaces" / "arrow.site").read_text()
    ws = sitekit.parse_workspace(text)
    again = sitekit.parse_workspace(sitekit.serialize_workspace(ws))
    assert sitekit.serialize_workspace(again) == sitekit.serialize_workspace(ws)
    cat, topo = ws.site("S")
    assert cat.name == "arr"
    assert not sitekit.check_sheaf(cat, topo, ws.presheaf("P"))["is_sheaf"]


def test_fraisse_chain():
    report = sitekit.verify_class("linord")
    assert report["amalgamation"] and report["joint_embedding"]
    c1 = sitekit.build_limit("linord", 30, 1)
    c2 = sitekit.build_limit("linord", 30, 2)
    assert c1.sizes == sorted(c1.sizes)
    assert sitekit.check_limit_extension(c1, 10, 3)["ok"]
    assert sitekit.back_and_forth(c1, c2, 8)["ok"]
    replay = sitekit.LimitChain.from_json(c1.to_json())
    assert replay.to_json() == c1.to_json()


def test_cli_reports_are_deterministic():
    args = [
        "fraisse", "limit", "--class", "graph",
        "--steps", "10", "--seed", "3", "--json",
    ]
    code1, out1, _ = sitekit.run_cli(args)
    code2, out2, _ = sitekit.run_cli(args)
    assert code1 == code2 == 0
    assert out1 == out2
    assert json.loads(out1)["schema_version"] == 1


def test_cli_reports_match_the_schema():
    import jsonschema

    schema = json.loads((ROOT / "schemas" / "report.schema.json").read_text())
    fixture = str(ROOT / "workspaces" / "arrow.site")
    for args in (
        ["props", "arr", "-f", fixture, "--json"],
        ["invariants", "S", "-f", fixture, "--json"],
        ["sheaf", "check", "S", "P", "-f", fixture, "--json"],
        ["fraisse", "verify", "--class", "linord", "--bound", "3", "--json"],
    ):
        _, out, _ = sitekit.run_cli(args)
        jsonschema.validate(json.loads(out), schema)
