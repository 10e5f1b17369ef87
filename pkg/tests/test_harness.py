import json
import subprocess
import sys

import pytest

from formhyp.catalog import TIERS, UnknownGroup, builtin_catalog, get_group
from formhyp.cli import (
    EXIT_BAD_SPEC,
    EXIT_CAP,
    EXIT_FAIL,
    EXIT_OK,
    EXIT_UNKNOWN_GROUP,
    main,
)
from formhyp.formations import Nilpotent, Partition, SigmaNilpotent, Supersoluble
from formhyp.harness import (
    Report,
    find_counterexample,
    verify_corollary_gs,
    verify_hall,
    verify_lemma_suite,
    verify_sampled_lemmas,
    verify_theorem1,
)

SINGLETONS, S23 = Partition.parse("singletons"), Partition.parse("2,3")


def test_catalog_contents():
    cat = builtin_catalog()
    labels = cat.labels()
    assert len(labels) == len(set(labels))
    for need in ["A5", "T294", "Q8", "Q16", "S3", "S4", "A4", "SL(2,3)", "F20", "F21", "C3:C4", "S3xC2", "A4xC2"]:
        assert need in labels
    assert get_group("A5").order == 60 and get_group("T294").order == 294
    assert len(cat.tier("small")) >= 25
    assert "T294" not in {G.label for G in cat.tier("medium")}
    assert {f"C{n}" for n in range(1, 25)} <= set(labels)
    assert {f"D{n}" for n in range(6, 33, 2)} <= set(labels)
    for G in cat.tier("large"):
        assert G.order <= TIERS["large"]
    with pytest.raises(UnknownGroup):
        get_group("S7")


def test_report_format_and_determinism():
    a = verify_hall("small").to_ndjson()
    b = verify_hall("small").to_ndjson()
    assert a == b
    first = json.loads(a.splitlines()[0])
    assert set(first) == {"suite", "group", "check", "formation", "sigma", "status", "detail"}
    rep = Report("x")
    rep.add("G", "c", True)
    rep.add("G", "d", None)
    assert rep.passed
    rep.add("G", "e", False)
    assert not rep.passed and rep.counts() == {"pass": 1, "fail": 1, "skipped": 1}


def test_theorem1_examples():
    S3, S4, Q8 = get_group("S3"), get_group("S4"), get_group("Q8")
    rep = verify_theorem1(SINGLETONS, groups=[S3, Q8])
    orders = {r.group: r.detail["orders"] for r in rep.records}
    assert orders["S3"] == {"S": 1, "C": 1, "Z": 1, "Int": 1}
    assert orders["Q8"] == {"S": 8, "C": 8, "Z": 8, "Int": 8}
    rep = verify_theorem1(S23, groups=[S4])
    assert rep.records[0].detail["orders"] == {"S": 24, "C": 24, "Z": 24, "Int": 24}


def test_hall_examples():
    rep = verify_hall(groups=[get_group(x) for x in ["S3", "D12", "Q8"]])
    assert rep.passed
    orders = {r.group: r.detail["orders"] for r in rep.records if r.check.startswith("normalizers")}
    assert orders == {"S3": [1, 1, 1], "D12": [2, 2, 2], "Q8": [8, 8, 8]}


def test_normalizer_family_examples():
    rep = verify_corollary_gs(SINGLETONS, get_group("S4"), "PiMaximalAll")
    main_rec = [r for r in rep.records if r.check.endswith("normalizers=hypercenter")][0]
    assert rep.passed and main_rec.detail["orders"] == [1, 1]
    rep = verify_corollary_gs(S23, get_group("A4"), "PiMaximalAll")
    assert [r.detail["orders"] for r in rep.records if "orders" in r.detail] == [[12, 12]]
    rep = verify_corollary_gs(SINGLETONS, get_group("A5"), "HallSystem")
    assert rep.passed and [r.detail["orders"] for r in rep.records if "orders" in r.detail] == [[1, 1]]
    rep = verify_corollary_gs(Partition.parse("3,5"), get_group("A5"), "HallSystem")
    assert [r.status for r in rep.records] == ["skipped"]


def test_lemma_suite_examples():
    rep = verify_lemma_suite(6, formations=[Supersoluble()], budget=20)
    ints = [r for r in rep.records if r.group == "S3" and r.check.startswith("int:")]
    assert ints and ints[0].status == "pass" and ints[0].detail["orders"] == [6, 6, 6, 6]
    rep = verify_lemma_suite(24, formations=[Supersoluble()], budget=20)
    routes = [r for r in rep.records if r.group == "SL(2,3)" and r.check.startswith("routes:s_f")]
    assert routes[0].status == "pass" and routes[0].detail["orders"] == [2, 2]


def test_sampled_lemmas_seeded():
    a = verify_sampled_lemmas(24, budget=60, seed=3).to_ndjson()
    assert a == verify_sampled_lemmas(24, budget=60, seed=3).to_ndjson()
    assert a != verify_sampled_lemmas(24, budget=60, seed=4).to_ndjson()


def test_counterexample_search():
    found = find_counterexample(Supersoluble(), "large")
    assert found["group"] == "T294"
    assert found["s_f_order"] == 294 and found["hypercenter_order"] == 1
    assert find_counterexample(Nilpotent(), "large") is None
    assert find_counterexample(SigmaNilpotent(S23), "medium") is None


# -- CLI ---------------------------------------------------------------------


def test_cli_hall_report(tmp_path, capsys):
    out = tmp_path / "hall.ndjson"
    assert main(["verify", "--suite", "hall", "--tier", "small", "--report", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines and all(json.loads(x)["status"] == "pass" for x in lines)


def test_cli_graph_and_hypercenter(capsys):
    assert main(["graph", "--group", "S4"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == ["2 3", "3 2"]
    assert main(["hypercenter", "--group", "Q8", "--formation", "nilpotent"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["order"] == 8


def test_cli_subnormal_and_witness(capsys):
    assert main(["subnormal", "--group", "S3", "--sub", "1", "--formation", "nsigma:2,3"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["k_f_subnormal"] and doc["subgroup_order"] == 2
    assert main(["witness", "--formation", "nilpotent", "--tier", "small"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "none"


def test_cli_catalog_list(capsys):
    assert main(["catalog", "list", "--tier", "small"]) == EXIT_OK
    rows = capsys.readouterr().out.splitlines()
    assert len(rows) == len(builtin_catalog().tier("small"))


def test_cli_error_codes(monkeypatch, capsys):
    assert main(["graph", "--group", "NOPE"]) == EXIT_UNKNOWN_GROUP
    assert main(["hypercenter", "--group", "S3", "--formation", "abelian"]) == EXIT_BAD_SPEC
    assert main(["verify", "--suite", "theorem1", "--sigma", "2,4"]) == EXIT_BAD_SPEC
    assert main(["subnormal", "--group", "S3", "--sub", "9", "--formation", "nilpotent"]) == EXIT_BAD_SPEC
    monkeypatch.setenv("FORMHYP_ORDER_CAP", "100")
    assert main(["hypercenter", "--group", "T294", "--formation", "nilpotent"]) == EXIT_CAP
    assert len({EXIT_OK, EXIT_FAIL, EXIT_UNKNOWN_GROUP, EXIT_BAD_SPEC, EXIT_CAP}) == 5
    capsys.readouterr()


def test_cli_fail_exit_code(monkeypatch, capsys):
    import formhyp.cli as cli

    def broken(tier):
        rep = Report("hall")
        rep.add("G", "c", False)
        return rep

    monkeypatch.setattr(cli, "verify_hall", broken)
    assert main(["verify", "--suite", "hall"]) == EXIT_FAIL
    capsys.readouterr()


def test_cli_group_file(tmp_path, capsys):
    p = tmp_path / "s3.json"
    p.write_text(json.dumps({"permutations": [[1, 0, 2], [1, 2, 0]]}), encoding="utf-8")
    assert main(["graph", "--group", str(p)]) == EXIT_OK
    assert capsys.readouterr().out == "3 2\n"


def test_console_script_entry():
    r = subprocess.run([sys.executable, "-m", "formhyp.cli", "graph", "--group", "A4"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "2 3\n"
