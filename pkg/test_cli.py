"""
Command-line surface: document parsing, exit codes and report files.
"""

import json

import pytest

from conftest import rep_over
from src.algebra import direct_sum, ground_algebra, regular_module, truncated_polynomial
from src.cli import CommandRequest, build_parser, execute, main, parse_documents
from src.errors import InputError, ModuleError
from src.exactlin import Field
from src.fintype import enumerate_indecomposables
from src.monrep import m_functor, simple_lift
from src.quiver import Quiver, kq_standard_module
from src.schemas import module_doc, representation_doc
from src.utils import load_representation_dir

A2 = {"vertices": 2, "arrows": [{"from": 2, "to": 1}]}
DUAL = {"kind": "trunc_poly", "t": 2, "field": "fp:2"}


def write(path, doc):
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


@pytest.fixture
def docs(tmp_path):
    """A_2, k[x]/x^2 over F_2 and a few representations over them."""
    f2 = Field.prime(2)
    a = regular_module(truncated_polynomial(f2, 2))
    q = Quiver.linear(2)
    return {
        "dir": tmp_path,
        "quiver": write(tmp_path / "a2.json", A2),
        "algebra": write(tmp_path / "dual.json", DUAL),
        "t": write(tmp_path / "t.json", module_doc(a)),
        "s2": write(tmp_path / "s2.json", representation_doc(simple_lift(q, 2, a))),
        "p2": write(tmp_path / "p2.json", representation_doc(m_functor(q, 2, a))),
        "p1_only": write(tmp_path / "p1.json", module_doc(m_functor(q, 1, a).module)),
    }


class TestParsing:
    def test_relation_failure_is_located(self, tmp_path):
        bad = write(tmp_path / "bad.json", {"algebra": DUAL, "dim": 1, "action": [[[1]], [[1]]]})
        req = CommandRequest(command="decompose", module=bad)
        with pytest.raises(ModuleError) as info:
            parse_documents(req)
        assert info.value.location.endswith("bad.json#/action")
        assert "x·x" in info.value.message

    def test_non_intertwining_arrow(self, tmp_path, docs):
        doc = json.loads((docs["dir"] / "s2.json").read_text())
        doc["branches"] = [{"dim": 1, "action": [[[1]], [[0]]]},
                           {"dim": 2, "action": [[[1, 0], [0, 1]], [[0, 0], [1, 0]]]}]
        doc["arrows"] = [[[0, 1]]]
        bad = write(tmp_path / "bad_rep.json", doc)
        with pytest.raises(ModuleError) as info:
            parse_documents(CommandRequest(command="check-monic", rep=bad))
        assert info.value.location.endswith("#/arrows/0")

    def test_cycle_in_quiver(self, tmp_path):
        bad = write(tmp_path / "cycle.json", {"vertices": 2, "arrows": [{"from": 1, "to": 2}, {"from": 2, "to": 1}]})
        with pytest.raises(InputError, match="oriented cycle"):
            parse_documents(CommandRequest(command="gorenstein", quiver=bad, field="fp:2"))

    def test_ground_field_default(self, docs):
        found = parse_documents(CommandRequest(command="gorenstein", quiver=docs["quiver"], field="fp:3"))
        assert found.algebra.kind == "ground"
        assert found.context.dim == 3

    def test_t_over_base_for_transfer(self, docs):
        found = parse_documents(CommandRequest(command="transfer", quiver=docs["quiver"], algebra=docs["algebra"],
                                               tmodule=docs["t"]))
        assert found.tmodule.algebra == found.algebra


class TestExitCodes:
    def test_check_monic_fails_with_witness(self, docs):
        report, code = execute(CommandRequest(command="check-monic", rep=docs["s2"]))
        assert code == 1
        assert report["verdict"]["status"] == "fails"
        assert report["verdict"]["witness"]["vertex"] == 1

    def test_check_monic_holds(self, docs):
        report, code = execute(CommandRequest(command="check-monic", rep=docs["p2"]))
        assert code == 0
        assert report["result"]["dim_vector"] == [2, 2]

    def test_cok(self, docs):
        report, code = execute(CommandRequest(command="cok", rep=docs["s2"], vertex=2))
        assert code == 0 and report["result"]["dim"] == 2
        _, missing = execute(CommandRequest(command="cok", rep=docs["s2"]))
        assert missing == 3

    def test_certify_without_cogenerator(self, docs):
        report, code = execute(CommandRequest(command="certify-finite-type", quiver=docs["quiver"],
                                              algebra=docs["algebra"], module=docs["p1_only"]))
        assert code == 1
        assert report["result"]["conclusion"] is None

    def test_unreadable_document(self, tmp_path):
        broken = tmp_path / "broken.json"
        broken.write_text("{not json", encoding="utf-8")
        report, code = execute(CommandRequest(command="check-monic", rep=str(broken)))
        assert code == 3
        assert report["error"]["type"] == "InputError"

    def test_missing_argument(self, docs):
        report, code = execute(CommandRequest(command="ext", rep=docs["s2"]))
        assert code == 3
        assert "--module2" in report["error"]["message"]

    def test_transfer_precondition(self, tmp_path, docs):
        top = write(tmp_path / "top.json", module_doc(truncated_polynomial(Field.prime(2), 2).top))
        report, code = execute(CommandRequest(command="transfer", quiver=docs["quiver"], algebra=docs["algebra"],
                                              tmodule=top, cutoff=2))
        assert code == 1
        assert "precondition" in report["verdict"]["witness"]

    def test_perp_unknown(self, tmp_path, docs):
        top = write(tmp_path / "top.json", module_doc(truncated_polynomial(Field.prime(2), 2).top))
        report, code = execute(CommandRequest(command="perp", module=docs["t"], tmodule=top, cutoff=2))
        assert code == 2
        assert report["verdict"]["cutoffs"] == {"cutoff": 2}

    def test_iso_search_uses_configured_trials(self, tmp_path, docs, monkeypatch):
        k = ground_algebra(Field.rational())
        q = Quiver.linear(2)
        paths = []
        for scalar in (1, 2):
            x = rep_over(q, k, [regular_module(k)] * 2, [[[scalar]]])
            paths.append(write(tmp_path / f"p2_{scalar}.json", module_doc(x.module, with_algebra=False)))
        monkeypatch.setattr("src.cli.DECOMPOSITION_TRIALS", 0)
        report, code = execute(CommandRequest(command="iso", quiver=docs["quiver"], field="q",
                                              module=paths[0], module2=paths[1]))
        assert code == 2
        assert report["verdict"]["cutoffs"] == {"attempts": 0}


class TestCommands:
    def test_ext_over_ground_field(self, tmp_path, docs):
        f2 = Field.prime(2)
        q = Quiver.linear(2)
        s1 = write(tmp_path / "s1.json", module_doc(kq_standard_module(q, f2, "simple", 1).module, with_algebra=False))
        s2 = write(tmp_path / "s2k.json", module_doc(kq_standard_module(q, f2, "simple", 2).module, with_algebra=False))
        report, code = execute(CommandRequest(command="ext", quiver=docs["quiver"], field="fp:2",
                                              module=s2, module2=s1))
        assert code == 0
        assert report["result"]["dims"] == [0, 1, 0]

    def test_reciprocity_on_oracle_dir(self, tmp_path, docs):
        oracle = tmp_path / "oracle"
        assert main(["enumerate", "--quiver", docs["quiver"], "--algebra", docs["algebra"], "--bound", "1",
                     "--out", str(oracle), "--quiet"]) == 0
        assert (oracle / "index.json").exists() and (oracle / "counts.csv").exists()
        report, code = execute(CommandRequest(command="reciprocity", quiver=docs["quiver"], algebra=docs["algebra"],
                                              tmodule=docs["t"], testset=str(oracle)))
        assert code == 0, report

    def test_emitted_documents_round_trip(self, tmp_path, docs):
        oracle = tmp_path / "oracle"
        main(["enumerate", "--quiver", docs["quiver"], "--algebra", docs["algebra"], "--bound", "1,2",
              "--out", str(oracle), "--quiet"])
        a = truncated_polynomial(Field.prime(2), 2)
        expected = enumerate_indecomposables(Quiver.linear(2), a, [1, 2]).representations
        loaded = load_representation_dir(str(oracle))
        assert loaded == expected
        index = json.loads((oracle / "index.json").read_text())
        assert index["bound"] == [1, 2] and len(index["files"]) == len(expected)

    def test_decompose_multiplicities(self, tmp_path):
        a = regular_module(truncated_polynomial(Field.prime(2), 2))
        both = write(tmp_path / "aa.json", module_doc(direct_sum([a, a])))
        report, code = execute(CommandRequest(command="decompose", module=both))
        assert code == 0
        assert [s["multiplicity"] for s in report["result"]["summands"]] == [2]

    def test_certify_regular_over_ground_field(self, tmp_path, docs):
        f2 = Field.prime(2)
        regular = kq_standard_module(Quiver.linear(2), f2, "projective", 1).module.algebra.regular
        m = write(tmp_path / "kq.json", module_doc(regular, with_algebra=False))
        report, code = execute(CommandRequest(command="certify-finite-type", quiver=docs["quiver"], field="fp:2",
                                              module=m))
        assert code == 0
        assert report["result"]["conclusion"] == "Mon(Q,A) = add(M)"


class TestMain:
    def test_reports_are_byte_identical(self, tmp_path, docs):
        first, second = tmp_path / "one.json", tmp_path / "two.json"
        for out in (first, second):
            code = main(["check-monic", "--rep", docs["s2"], "--out", str(out), "--quiet"])
            assert code == 1
        assert first.read_bytes() == second.read_bytes()
        assert first.read_text().endswith("\n")

    def test_json_on_stdout(self, capsys, docs):
        assert main(["check-monic", "--rep", docs["p2"], "--json", "--quiet"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["verdict"]["status"] == "holds"

    def test_negative_cutoff(self, docs):
        assert main(["perp", "--module", docs["t"], "--tmodule", docs["t"], "--cutoff", "-1", "--quiet"]) == 3

    def test_every_command_is_registered(self):
        parser = build_parser()
        args = parser.parse_args(["enumerate", "--bound", "2", "--monic-only"])
        assert args.monic_only and args.bound == "2"
        with pytest.raises(SystemExit):
            parser.parse_args(["no-such-command"])
