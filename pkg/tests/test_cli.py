import json

import pytest

from efftop.cli import (
    EXIT_INCONCLUSIVE,
    EXIT_PARSE,
    EXIT_REFUTED,
    EXIT_VERIFIED,
    main,
)


def run(tmp_path, args, name="report.json"):
    out = tmp_path / name
    code = main(args + ["--out", str(out)])
    report = json.loads(out.read_text()) if out.exists() else None
    return code, report, out


def oracle_file(tmp_path):
    path = tmp_path / "a.dce"
    path.write_text("dce v1\n1 0 1\n2 2 1\n5 2 0\n3 4 1\n")
    return str(path)


# ---------------------------------------------------------------------------
# Exit codes


def test_equal_verified(tmp_path):
    code, report, _ = run(tmp_path, ["ceer", "equal", "0", "2",
                                     "--pairs", "0 1,1 2"])
    assert code == EXIT_VERIFIED
    assert report["verdict"] == "verified"
    assert report["certificates"][0]["kind"] == "merge-trace"


def test_equal_inconclusive(tmp_path):
    code, report, _ = run(tmp_path, ["ceer", "equal", "0", "9",
                                     "--pairs", "0 1", "--fuel", "50"])
    assert code == EXIT_INCONCLUSIVE
    assert report["verdict"] == "inconclusive"


def test_example35_refuted(tmp_path):
    code, report, _ = run(tmp_path, ["ceer", "example35", "--count", "5",
                                     "--fuel", "5000"])
    assert code == EXIT_REFUTED
    assert all(c["ok"] for c in report["checks"])


def test_parse_errors(tmp_path):
    assert main(["ceer", "equal", "0", "1"]) == EXIT_PARSE  # no generators
    assert main(["ceer", "equal", "0", "1", "--pairs", "zap"]) == EXIT_PARSE
    assert main(["example", "sa", "--oracle", str(tmp_path / "missing")]) == EXIT_PARSE
    assert main(["nonsense"]) == EXIT_PARSE
    assert main(["ceer", "equal", "0", "1", "--pairs", "0 1",
                 "--fuel", "0"]) == EXIT_PARSE
    bad = tmp_path / "bad.dce"
    bad.write_text("dce v1\n1 0 1\n2 0 0\n3 0 1\n")
    assert main(["example", "sa", "--oracle", str(bad)]) == EXIT_PARSE


def test_global_flags_after_subcommand(tmp_path):
    code, report, _ = run(tmp_path, ["ceer", "equal", "0", "1",
                                     "--pairs", "0 1", "--fuel", "77"])
    assert code == EXIT_VERIFIED
    assert report["config"]["fuel"] == 77
    assert report["timing"] == {"units": "fuel", "fuel_budget": 77}


# ---------------------------------------------------------------------------
# Command coverage


def test_space_commands(tmp_path):
    code, report, _ = run(tmp_path, ["space", "discrete", "4", "4"])
    assert code == EXIT_VERIFIED
    code, _, _ = run(tmp_path, ["space", "hausdorff", "4", "5"])
    assert code == EXIT_VERIFIED
    code, _, _ = run(tmp_path, ["space", "extend-open"])
    assert code == EXIT_VERIFIED
    code, report, _ = run(tmp_path, ["space", "separate-balls",
                                     "--dimension", "2"])
    assert code == EXIT_VERIFIED
    assert report["checks"][0]["overlaps"] == 0


def test_witness_seq_nat_verified(tmp_path):
    code, report, _ = run(tmp_path, ["space", "witness-seq", "--bound", "5"])
    assert code == EXIT_VERIFIED
    assert report["certificates"][0]["kind"] == "witness-rows"


def test_witness_seq_ha_refuted(tmp_path):
    # the naive head-only sequence wrongly separates two names of a
    code, report, _ = run(tmp_path, ["space", "witness-seq",
                                     "--oracle", oracle_file(tmp_path)])
    assert code == EXIT_REFUTED
    assert report["certificates"][0]["violations"]


def test_example_sa(tmp_path):
    code, report, _ = run(tmp_path, ["example", "sa",
                                     "--oracle", oracle_file(tmp_path),
                                     "--bound", "8"])
    assert code == EXIT_VERIFIED
    kinds = {c["check"] for c in report["checks"]}
    assert kinds == {"iso-roundtrip", "norm-to-dce", "embedding-roundtrip"}


def test_example_da_ha_pn_nprime(tmp_path):
    code, _, _ = run(tmp_path, ["example", "da",
                                "--oracle", oracle_file(tmp_path)])
    assert code == EXIT_VERIFIED
    code, _, _ = run(tmp_path, ["example", "ha",
                                "--oracle", oracle_file(tmp_path)])
    assert code == EXIT_VERIFIED
    stream = tmp_path / "p.stream"
    stream.write_text("stream v1\n3\n1\n4\n")
    code, _, _ = run(tmp_path, ["example", "pn", "--stream", str(stream)])
    assert code == EXIT_VERIFIED
    bb = tmp_path / "t.bb"
    bb.write_text("bb v1\naudit 200\n1 1\n2 2\n3 4\n")
    code, report, _ = run(tmp_path, ["example", "nprime", "--bb", str(bb)])
    assert code == EXIT_VERIFIED
    assert all(c["ok"] for c in report["checks"])


def test_example_diag_da(tmp_path):
    wit = tmp_path / "suite.hwit"
    wit.write_text("hwit v1\ncandidate\ncandidate\npair 0 1 | 0 0 1\n")
    code, report, _ = run(tmp_path, ["example", "diag-da",
                                     "--witnesses", str(wit)])
    assert code == EXIT_REFUTED
    assert report["checks"][0]["stages"] == 2


def test_example_diag_inj(tmp_path):
    code, report, _ = run(tmp_path, ["example", "diag-inj",
                                     "--candidate", "0", "--fuel", "5000"])
    assert code == EXIT_REFUTED
    assert report["checks"][0]["reached"] == 3


def test_ceer_closure_iso_probe(tmp_path):
    ceer = tmp_path / "e.ceer"
    ceer.write_text("ceer v1\npairs\n0 1\n2 3\n")
    code, report, _ = run(tmp_path, ["ceer", "closure", "--ceer", str(ceer)])
    assert code == EXIT_VERIFIED
    assert [0, 1] in report["checks"][0]["classes"]
    code, report, _ = run(tmp_path, ["ceer", "iso", "--ceer", str(ceer),
                                     "--bound", "6", "--fuel", "20000"])
    assert code == EXIT_VERIFIED
    code, report, _ = run(tmp_path, ["ceer", "probe", "--ceer", str(ceer),
                                     "--class-a", "0", "--class-b", "2",
                                     "--separator", "0"])
    assert code in (EXIT_REFUTED, EXIT_INCONCLUSIVE)


# ---------------------------------------------------------------------------
# Determinism and verify mode


def test_reports_are_byte_identical(tmp_path):
    commands = [
        ["ceer", "equal", "0", "2", "--pairs", "0 1,1 2"],
        ["ceer", "example35", "--count", "3", "--fuel", "3000"],
        ["space", "separate-balls", "--dimension", "1"],
        ["space", "witness-seq", "--bound", "4"],
        ["example", "sa", "--oracle", oracle_file(tmp_path), "--bound", "5"],
        ["example", "diag-inj", "--candidate", "0", "--fuel", "3000"],
    ]
    for i, cmd in enumerate(commands):
        _, _, first = run(tmp_path, cmd, name=f"a{i}.json")
        _, _, second = run(tmp_path, cmd, name=f"b{i}.json")
        assert first.read_bytes() == second.read_bytes()


def test_verify_accepts_valid_report(tmp_path):
    _, _, path = run(tmp_path, ["ceer", "equal", "0", "2",
                                "--pairs", "0 1,1 2"])
    code, result, _ = run(tmp_path, ["--verify", str(path)], name="verify.json")
    assert code == EXIT_VERIFIED
    assert result["verdict"] == "verified"


def test_verify_rejects_tampered_report(tmp_path):
    _, report, path = run(tmp_path, ["ceer", "equal", "0", "2",
                                     "--pairs", "0 1,1 2"])
    report["certificates"][0]["pairs"] = [[0, 1]]  # drop the bridging pair
    path.write_text(json.dumps(report))
    code, result, _ = run(tmp_path, ["--verify", str(path)], name="verify.json")
    assert code == EXIT_REFUTED
    assert result["verdict"] == "refuted"


def test_verify_diag_da_detects_witness_change(tmp_path):
    wit = tmp_path / "suite.hwit"
    wit.write_text("hwit v1\ncandidate\npair 0 1 | 0 0 1\n")
    _, _, path = run(tmp_path, ["example", "diag-da", "--witnesses", str(wit)])
    code, _, _ = run(tmp_path, ["--verify", str(path)], name="v1.json")
    assert code == EXIT_VERIFIED
    wit.write_text("hwit v1\ncandidate\npair 1 1 | 0 0 1\n")
    code, result, _ = run(tmp_path, ["--verify", str(path)], name="v2.json")
    assert code == EXIT_REFUTED


def test_config_hash_tracks_inputs(tmp_path):
    _, r1, _ = run(tmp_path, ["ceer", "equal", "0", "1", "--pairs", "0 1"],
                   name="h1.json")
    _, r2, _ = run(tmp_path, ["ceer", "equal", "0", "1", "--pairs", "0 1",
                              "--fuel", "123"], name="h2.json")
    assert r1["config_hash"] != r2["config_hash"]
    assert r1["config"]["seed"] == 0
