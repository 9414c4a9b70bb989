import json
import random

import pytest

from tropgrass import semifield
from tropgrass.cli import main
from tropgrass.hive import all_plucker_zero, plucker_json
from tropgrass.trop import chart_ref_confA, lift_to_series, random_trop_point
from tropgrass.seeds import confA_seed


def read(path):
    return json.loads(path.read_text())


def test_seed_gr48(tmp_path):
    out = tmp_path / "s.json"
    assert main(["seed", "--k", "4", "--n", "8", "--out", str(out)]) == 0
    data = read(out)
    assert len(data["indices"]) == 17 and len(data["frozen"]) == 8


def test_check_cone_on_zero(tmp_path, capsys):
    src = tmp_path / "zero.json"
    y = all_plucker_zero(3, 5)
    src.write_text(json.dumps({"k": 3, "n": 5, "plucker": plucker_json(y)}))
    assert main(["check-cone", str(src), "--strict"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["agree"] and rep["cone"]["member"]
    assert all(r["slack"] == [0, 1] for r in rep["cone"]["inequalities"])
    assert rep["cone"]["boundary_member"] and not rep["cone"]["interior_member"]
    assert len(rep["cone"]["tight"]) == 5


def test_pipeline(tmp_path):
    y, y2, x, o = (tmp_path / f for f in ("y.json", "y2.json", "x.json", "o.json"))
    assert main(["rand", "--kind", "plucker", "--k", "2", "--n", "5", "--rng-seed", "3", "--out", str(y)]) == 0
    assert main(["lineality", str(y), "--lp", "--out", str(y2)]) == 0
    assert read(y2)["cone_member"]
    assert main(["check-cone", str(y2), "--out", str(tmp_path / "c.json")]) == 0
    assert main(["lift", str(y2), "--check", "--out", str(x)]) == 0
    assert main(["oracle", str(x), "--out", str(o)]) == 0
    rep = read(o)
    assert rep["agree"] and rep["partner_independent"]
    assert all(r["chart"] == r["oracle"] for r in rep["rows"])
    svg = tmp_path / "d.svg"
    assert main(["diagram", str(x), "--out", str(svg), "--title", "t"]) == 0
    assert svg.read_text().startswith("<?xml")
    assert main(["mutate", str(x), "--path", "1^1 3^1", "--out", str(tmp_path / "m.json")]) == 0


def test_rng_seed_is_reproducible_in_either_position(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["--rng-seed", "9", "rand", "--kind", "hive", "--k", "3", "--n", "4", "--out", str(a)])
    main(["rand", "--kind", "hive", "--k", "3", "--n", "4", "--rng-seed", "9", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_oracle_flags_non_hive_point(tmp_path):
    src = tmp_path / "c.json"
    x = random_trop_point(random.Random(1), confA_seed(3, 4), chart_ref_confA(3, 4))
    x = x.with_coords([c - 5 if lab.exp(1) == 1 else c for lab, c in x.by_label().items()])
    src.write_text(json.dumps(x.to_json()))
    assert main(["oracle", str(src), "--out", str(tmp_path / "o.json")]) == 1
    assert not read(tmp_path / "o.json")["hive"]


def test_tropicalize(tmp_path, capsys):
    rng = random.Random(2)
    x = random_trop_point(rng, confA_seed(2, 4), chart_ref_confA(2, 4), denom=2)
    lifted = lift_to_series(x, rng)
    src = tmp_path / "s.json"
    src.write_text(json.dumps({"chart": x.ref,
                               "coords": {str(lab): c.to_json() for lab, c in lifted.by_label().items()}}))
    assert main(["tropicalize", str(src)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["coords"] == x.to_json()["coords"]


def test_mutate_seed_twice_is_identity(tmp_path):
    s, m = tmp_path / "s.json", tmp_path / "m.json"
    main(["seed", "--kind", "confA", "--k", "3", "--n", "5", "--out", str(s)])
    assert main(["mutate", str(s), "--path", "1^1 2^1 3^1;1^1 2^1 3^1", "--out", str(m)]) == 0
    a, b = read(s), read(m)
    assert a["B"] == b["B"]


def test_errors_exit_2(tmp_path, capsys):
    assert main(["lift", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["check-cone", str(bad)]) == 2
    good = tmp_path / "g.json"
    good.write_text(json.dumps({"k": 2, "n": 4, "plucker": {}}))
    assert main(["lineality", str(good), "--coeffs", "1,2"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["seed", "--k", "2"])
    assert exc.value.code == 2


def test_precision_flag(tmp_path):
    old = semifield.REL_PREC
    try:
        assert main(["--precision", "40", "seed", "--k", "2", "--n", "4", "--out", str(tmp_path / "s.json")]) == 0
        assert semifield.REL_PREC == 40
    finally:
        semifield.REL_PREC = old
