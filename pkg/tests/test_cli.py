"""Front-end behavior: sources, suites, reports, determinism, exit codes."""

import json

import pytest

from qhd.cli import InputError, RunSpec, main, parse_input, resolve_builtin, run


def run_spec(source, suites=("all",), **kw):
    return run(RunSpec(source=source, suites=suites, **kw))


def test_builtin_ids():
    assert resolve_builtin("zn:4:1").group.order == 4
    assert resolve_builtin("trivial:3").root_order == 1
    assert resolve_builtin("v4:2").group.order == 4
    for bad in ("zn:4", "zn:0:1", "nope:1", "v4:9", "zn:x:y"):
        with pytest.raises(InputError):
            resolve_builtin(bad)


def test_full_run_passes_and_exit_zero():
    rep = run_spec("zn:3:1")
    assert rep.exit_code == 0
    total, passed, failed, skipped = rep.counts()
    assert failed == 0 and skipped == 0 and passed == total


def test_invertibility_suite_on_twisted_example_passes():
    # the expected outcome IS non-invertibility, so the suite passes
    rep = run_spec("zn:2:1", suites=("invertibility",))
    assert rep.exit_code == 0
    items = {i.label: i for _, rec in rep.suites for i in rec.items}
    assert "not two-sided invertible" in items["5.r-W"].detail
    assert "zeta_2^1" in items["5.r-criterion"].detail


def test_hopf_degeneration_items_only_for_trivial():
    rep = run_spec("trivial:2", suites=("theorems",))
    labels = [i.label for _, rec in rep.suites for i in rec.items]
    assert "hopf.pentagon" in labels
    rep = run_spec("zn:2:1", suites=("theorems",))
    labels = [i.label for _, rec in rep.suites for i in rec.items]
    assert "hopf.pentagon" not in labels


def test_json_report_schema_and_determinism():
    spec = RunSpec(source="zn:2:1", suites=("axioms", "invertibility"),
                   report_format="json")
    a = run(spec).to_json()
    b = run(spec).to_json()
    assert a == b  # byte-identical for a fixed spec
    doc = json.loads(a)
    assert set(doc) == {"spec", "suites", "summary"}
    assert doc["spec"]["source"] == "zn:2:1"
    assert doc["summary"]["failed"] == 0
    for entry in doc["suites"]:
        assert {"suite", "label", "name", "status", "discrepancies"} <= set(entry)
        assert "millis" not in entry  # timings stay opt-in to keep output stable


def test_suite_selection_and_unknown_suite():
    rep = run_spec("zn:2:1", suites=("axioms",))
    assert [name for name, _ in rep.suites] == ["axioms"]
    with pytest.raises(InputError):
        RunSpec(source="zn:2:1", suites=("bogus",)).selected()


def test_dependency_order_normalized():
    spec = RunSpec(source="zn:2:1", suites=("theorems", "axioms", "theorems"))
    assert spec.selected() == ("axioms", "theorems")


def test_parse_input_cyclic_shorthand(tmp_path):
    p = tmp_path / "in.qhd"
    p.write_text("# comment\ngroup cyclic 4\ncocycle cyclic 1\n")
    group, w = parse_input(str(p))
    from qhd.twisted import cyclic_cocycle

    ref = cyclic_cocycle(4, 1)
    assert group.cayley == ref.group.cayley
    assert w.exponents == ref.exponents and w.root_order == 4


def test_parse_input_explicit_tables_roundtrip(tmp_path):
    p = tmp_path / "z2.qhd"
    p.write_text(
        "group table 2\n0 1\n1 0\ncocycle table 2\n1 1 1 -> 1\n")
    group, w = parse_input(str(p))
    from qhd.twisted import cyclic_cocycle

    ref = cyclic_cocycle(2, 1)
    assert w.exponents == ref.exponents
    rep_file = run_spec(f"file:{p}", suites=("axioms",))
    rep_builtin = run_spec("zn:2:1", suites=("axioms",))
    assert [i.status for _, r in rep_file.suites for i in r.items] == \
        [i.status for _, r in rep_builtin.suites for i in r.items]


def test_parse_input_product_group(tmp_path):
    p = tmp_path / "v4.qhd"
    p.write_text("group product cyclic 2 cyclic 2\ncocycle trivial\n")
    group, w = parse_input(str(p))
    assert group.order == 4 and check_ok(w)


def check_ok(w):
    from qhd.twisted import check_cocycle

    return check_cocycle(w).ok


def test_parse_input_errors(tmp_path):
    cases = [
        ("latin", "group table 2\n0 1\n1 1\ncocycle trivial\n", "repeats"),
        ("syntax", "group cyclic 2\ncocycle table 2\n1 1 -> 1\n", "expected `a b c -> e`"),
        ("stanza", "cocycle trivial\n", "expected `group"),
        ("range", "group cyclic 2\ncocycle table 2\n1 1 3 -> 1\n", "out of range"),
    ]
    for name, text, needle in cases:
        p = tmp_path / f"{name}.qhd"
        p.write_text(text)
        with pytest.raises(InputError) as exc:
            parse_input(str(p))
        assert needle in str(exc.value), name
    with pytest.raises(InputError):
        parse_input(str(tmp_path / "missing.qhd"))


def test_parse_input_non_cocycle_table(tmp_path):
    p = tmp_path / "bad.qhd"
    p.write_text("group cyclic 3\ncocycle table 3\n1 1 1 -> 1\n")
    with pytest.raises(InputError) as exc:
        parse_input(str(p))
    assert "cocycle identity fails at" in str(exc.value)


def test_main_exit_codes(tmp_path, capsys):
    assert main(["--example", "zn:2:1", "--check", "axioms"]) == 0
    capsys.readouterr()
    assert main(["--example", "zn:2:bad"]) == 2
    err = capsys.readouterr().err
    assert "error:" in err
    bad = tmp_path / "bad.qhd"
    bad.write_text("group cyclic 3\ncocycle table 3\n1 1 1 -> 1\n")
    assert main(["--input", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "cocycle identity fails" in err


def test_main_writes_report_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["--example", "trivial:2", "--check", "axioms",
                 "--report", "json", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["summary"]["failed"] == 0
    assert "report written" in capsys.readouterr().out


def test_float_backend_cross_check_agrees():
    rep = run_spec("zn:3:1", suites=("axioms", "twist"), backend="float")
    assert rep.exit_code == 0
    for _, rec in rep.suites:
        for item in rec.items:
            if item.float_status is not None:
                assert item.float_status == item.status


def test_timings_flag_adds_millis():
    rep = run_spec("zn:2:1", suites=("axioms",), timings=True)
    items = [i for _, rec in rep.suites for i in rec.items]
    assert all(i.millis is not None for i in items)


def test_text_report_contains_summary_line():
    rep = run_spec("zn:2:1", suites=("axioms",))
    text = rep.to_text()
    assert text.startswith("source: zn:2:1")
    assert "summary:" in text and "0 failed" in text


def test_failed_prerequisite_skips_dependents(monkeypatch):
    import qhd.cli as cli

    def broken(ctx, rec):
        rec.bool_check("forced", "forced failure for dependency testing", False)

    monkeypatch.setitem(cli.SUITES, "axioms", broken)
    rep = run_spec("zn:2:1", suites=("axioms", "twist", "heisenberg"))
    assert rep.exit_code == 1
    by_suite = {name: rec for name, rec in rep.suites}
    assert [i.status for i in by_suite["axioms"].items] == ["fail"]
    assert [i.status for i in by_suite["twist"].items] == ["skipped"]
    assert "prerequisite suite axioms failed" in by_suite["twist"].items[0].detail
    assert [i.status for i in by_suite["heisenberg"].items] == ["skipped"]


def test_klein_tables_full_run():
    for tid in range(4):
        rep = run_spec(f"v4:{tid}")
        assert rep.exit_code == 0, tid
        total, passed, failed, skipped = rep.counts()
        assert failed == 0 and skipped == 0, tid


def test_float_defect_reported_when_paths_disagree():
    # exactly unequal sides whose float images coincide below tolerance:
    # the float verdict is flagged against the exact one
    from fractions import Fraction

    from qhd.algebra import SparseTensor
    from qhd.report import Recorder
    from qhd.scalar import CycScalar

    tiny = CycScalar(1, (Fraction(1, 10**12),))
    lhs = SparseTensor(1, 1, 1, {(0,): tiny})
    rhs = SparseTensor(1, 1, 1, {})
    rec = Recorder(float_check=True)
    ok = rec.tensor_check("t", "tiny exact difference", lhs, rhs)
    assert not ok
    item = rec.items[0]
    assert item.status == "fail" and item.float_status == "pass"
    assert "float" in item.detail
