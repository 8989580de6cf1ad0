import json
import subprocess
import sys
from pathlib import Path

import pytest

from racgkit import corpus
from racgkit.cli import main
from racgkit.simplicial import from_json

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestExamples:
    def test_kappa(self, capsys):
        code, out, _ = run(capsys, "kappa", "corpus:pentagon")
        assert code == 0 and out.strip() == "-1/4"

    def test_l2_expr(self, capsys):
        code, out, _ = run(capsys, "l2", "--expr", "(join (points 3) (points 3))")
        assert code == 0
        assert any(line.startswith("β₂ = 1/4") for line in out.splitlines())

    def test_certify_icosahedron(self, capsys, tmp_path):
        path = tmp_path / "c.json"
        code, out, _ = run(capsys, "certify-s2", "corpus:icosahedron", "--emit-cert", str(path))
        assert code == 0 and "andreev" in out
        assert json.loads(path.read_text())["kind"] == "andreev"
        code, out, _ = run(capsys, "verify-cert", str(path))
        assert code == 0

    def test_module_entry_point(self):
        res = subprocess.run([sys.executable, "-m", "racgkit", "kappa", "corpus:k33"],
                             capture_output=True, text=True)
        assert res.returncode == 0 and res.stdout.strip() == "1/4"


class TestCommands:
    @pytest.mark.parametrize("argv", [
        ("info", "corpus:octahedron"),
        ("homology", "corpus:pentagon"),
        ("ghs-check", "corpus:icosahedron", "-n", "2"),
        ("pseudomanifold", "corpus:octahedron"),
        ("spherical-links", "corpus:susp-pentagon", "-m", "3"),
        ("ball-check", "corpus:cone-pentagon"),
        ("racg", "nf", "corpus:pentagon", "v2 v0 v2 v2"),
        ("racg", "ball", "corpus:pentagon", "-N", "2"),
        ("racg", "cosets", "corpus:square", "-N", "1"),
        ("racg", "nerve", "corpus:pentagon", "--chambers", '[[], ["v0"]]'),
        ("davis-ball", "corpus:square", "-N", "2"),
        ("commutator-cover", "corpus:pentagon"),
        ("npc-check", "corpus:pentagon"),
        ("chi-check", "corpus:k33"),
        ("l2", "--recognize", "corpus:pentagon-join-pentagon"),
        ("atiyah-check", "corpus:k33"),
        ("fibration", "local-model", "-n", "3", "-l", "1"),
        ("fibration", "domain", "corpus:square"),
        ("fibration", "dplus", "corpus:square", "--orient", "++"),
        ("fibration", "search", "corpus:two-points"),
        ("corpus",),
        ("corpus", "octahedron"),
    ], ids=lambda a: " ".join(a[:2]))
    def test_runs_and_json_parses(self, capsys, argv):
        code, out, _ = run(capsys, *argv)
        assert code == 0 and out.strip()
        code, out, _ = run(capsys, *argv, "--json")
        assert code == 0
        json.loads(out)

    def test_nf_output(self, capsys):
        code, out, _ = run(capsys, "racg", "nf", "corpus:square", "v1 v0")
        assert out.strip().endswith("v0.v1")

    def test_search_reports_none_for_pentagon(self, capsys):
        code, out, _ = run(capsys, "fibration", "search", "corpus:pentagon", "--json")
        assert code == 0 and json.loads(out)["orientation"] is None

    def test_cover_off(self, capsys):
        code, out, _ = run(capsys, "commutator-cover", "corpus:square", "--format", "off")
        assert code == 0 and out.startswith("COFF\n16 48")


class TestErrors:
    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "info", "/nonexistent.json")
        assert code == 2 and "error" in err

    def test_bad_json_reports_line(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"format": "flag-graph",\n "vertices": [}')
        code, _, err = run(capsys, "info", str(p))
        assert code == 2 and "line 2" in err

    def test_non_flag(self, capsys, tmp_path):
        p = tmp_path / "hollow.json"
        p.write_text(json.dumps({"format": "simplicial",
                                 "maximal_simplices": [["a", "b"], ["b", "c"], ["a", "c"]]}))
        # kappa is defined for any simplicial complex; group-level commands need flagness
        assert run(capsys, "kappa", str(p))[0] == 0
        code, _, err = run(capsys, "racg", "ball", str(p), "-N", "1")
        assert code == 2 and "flag" in err
        assert run(capsys, "racg", "ball", str(p), "-N", "1", "--assume-flag")[0] == 0

    def test_non_sphere(self, capsys):
        code, _, _ = run(capsys, "certify-s2", "corpus:pentagon")
        assert code == 2

    def test_unknown_corpus(self, capsys):
        code, _, err = run(capsys, "info", "corpus:nope")
        assert code == 2 and "known" in err

    def test_bad_expression(self, capsys):
        code, _, _ = run(capsys, "l2", "--expr", "(mgon 3)")
        assert code == 2

    def test_bad_orientation(self, capsys):
        code, _, _ = run(capsys, "fibration", "dplus", "corpus:square", "--orient", "+x")
        assert code == 2

    def test_resource_limit(self, capsys, monkeypatch):
        monkeypatch.setenv("RACGKIT_MAX_P", "4")
        code, _, err = run(capsys, "commutator-cover", "corpus:pentagon")
        assert code == 2 and "limit" in err


class TestCorpus:
    def test_fvectors_match_golden(self):
        golden = json.loads((GOLDEN / "corpus_fvectors.json").read_text())
        assert set(golden) == set(corpus.names())
        for name, fv in golden.items():
            assert list(corpus.get(name).f_vector) == fv, name

    @pytest.mark.parametrize("name", corpus.names())
    def test_serialized_round_trip(self, capsys, name):
        code, out, _ = run(capsys, "corpus", name)
        assert code == 0
        assert from_json(out) == corpus.get(name)
