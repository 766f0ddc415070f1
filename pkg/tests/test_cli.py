import json
import subprocess
import sys

import pytest
from hypothesis import given, settings

from _strategies import seeds
from conftest import FIXTURES
from symtorsion import io as sio
from symtorsion.cli import run
from symtorsion.generators import GenConfig, gen_chain_complex, gen_ses, gen_symplectic


def call(*argv):
    status, out, err = run([str(a) for a in argv])
    return status, (json.loads(out) if out.strip().startswith("{") else out), err


def fx(name):
    return FIXTURES / name


class TestExitContract:
    def test_valid(self):
        status, rep, _ = call("verify", fx("valid.json"))
        assert status == 0 and rep["outputs"]["equal"]

    def test_unequal_probe(self):
        status, rep, _ = call("verify", "--probe", fx("unequal_probe.json"))
        assert status == 1
        assert rep["outputs"]["equal"] and not rep["outputs"]["probe"]["equal"]

    def test_malformed(self):
        status, out, err = call("verify", fx("malformed.json"))
        assert status == 2 and out == ""
        assert "line 1, column" in err

    def test_degenerate_pairing(self):
        status, rep, _ = call("verify", fx("degenerate.json"))
        assert status == 1 and "degenerate" in rep["outputs"]["error"]

    def test_unknown_command(self):
        assert call("frobnicate")[0] == 2

    def test_missing_file(self):
        assert call("check", fx("absent.json"))[0] == 2

    def test_console_script(self):
        out = subprocess.run([sys.executable, "-m", "symtorsion.cli", "pfaffian", str(fx("pfaffian_block.json"))],
                             capture_output=True, text=True)
        assert out.returncode == 0
        assert json.loads(out.stdout)["outputs"] == {"pfaffian": "1"}


class TestCommands:
    def test_torsion_times_two(self):
        status, rep, _ = call("torsion", fx("times_two.json"))
        assert status == 0 and rep["outputs"]["value"] == "2"

    def test_torsion_dzero(self):
        assert call("torsion", fx("dzero_torsion.json"))[1]["outputs"]["value"] == "1"

    def test_torsion_missing_homology(self):
        status, _, err = call("torsion", fx("missing_homology.json"))
        assert status == 2 and "homology_bases" in err

    def test_check_valid(self):
        status, rep, _ = call("check", fx("valid.json"))
        assert status == 0 and rep["outputs"]["symplectic"]["ok"]

    def test_check_not_skew(self):
        status, rep, _ = call("check", fx("not_skew.json"))
        assert status == 1
        assert rep["outputs"]["symplectic"]["violations"] == ["pairing 1 is not skew-symmetric"]

    def test_pfaffian_text(self):
        status, out, _ = call("pfaffian", "--format", "text", fx("pfaffian_block.json"))
        assert status == 0 and "outputs.pfaffian: 1" in out

    def test_split_dzero(self):
        rep = call("split", fx("valid.json"))[1]["outputs"]
        assert rep["exact"]["complex"]["dims"] == [0, 0, 0]
        assert rep["cross_orthogonal"]

    def test_homology(self):
        rep = call("homology", fx("times_two.json"))[1]["outputs"]
        assert rep["betti"] == [0, 0]

    def test_snake(self):
        rep = call("snake", fx("ses_connecting.json"))[1]["outputs"]
        assert rep["exact"] and rep["dims"] == [0, 0, 1, 1, 0, 0]
        assert rep["milnor"]["equal"]

    def test_verify_generated_exact(self):
        status, rep, _ = call("verify", "--kind", "exact", "--seed", "3")
        assert status == 0 and rep["outputs"]["lhs"] == rep["outputs"]["rhs"] == "1"

    def test_verify_batch_ordered(self, tmp_path):
        status, rep, _ = call("verify", "--kind", "dzero", "--batch", "6", "--jobs", "2", "--seed", "10")
        assert status == 0
        assert [r["instance"] for r in rep["outputs"]["instances"]] == [f"seed={s}" for s in range(10, 16)]

    def test_verify_batch_files(self):
        status, rep, _ = call("verify", "--batch", "2", fx("valid.json"), fx("unequal_probe.json"))
        assert status == 0 and rep["outputs"]["all_equal"]

    def test_output_file(self, tmp_path):
        target = tmp_path / "r.json"
        status, out, _ = call("pfaffian", "-o", target, fx("pfaffian_block.json"))
        assert status == 0 and out == ""
        assert json.loads(target.read_text())["outputs"]["pfaffian"] == "1"

    def test_report_stable_minus_duration(self):
        a = call("verify", fx("valid.json"))[1]
        b = call("verify", fx("valid.json"))[1]
        a.pop("duration_ms"), b.pop("duration_ms")
        assert a == b


class TestGen:
    def test_mixed_seed7_twice_identical(self, tmp_path):
        files = [tmp_path / "a.json", tmp_path / "b.json"]
        for f in files:
            assert call("gen", "--kind", "mixed", "--seed", "7", "-o", f)[0] == 0
        assert files[0].read_bytes() == files[1].read_bytes()

    @pytest.mark.parametrize("kind", ["chain", "ses", "dzero", "exact", "mixed"])
    def test_every_kind_checks(self, kind, tmp_path):
        f = tmp_path / "g.json"
        assert call("gen", "--kind", kind, "--seed", "2", "-o", f)[0] == 0
        assert call("check", f)[0] == 0

    def test_infeasible_is_usage(self):
        assert call("gen", "--kind", "mixed", "--n", "4")[0] == 2
        assert call("gen", "--betti", "x")[0] == 2


class TestRoundTrip:
    @pytest.mark.parametrize("name", ["valid.json", "unequal_probe.json", "times_two.json", "dzero_torsion.json",
                                      "ses_connecting.json", "pfaffian_block.json", "not_skew.json"])
    def test_fixtures_are_canonical(self, name):
        raw = fx(name).read_text()
        obj = sio.loads(raw)
        if "matrix" in obj:
            back = {"format_version": "1", "matrix": sio.matrix_to_json(sio.matrix_file_from_json(obj))}
        elif "ses" in obj:
            back = sio.ses_from_json(obj).to_json()
        else:
            back = sio.instance_from_json(obj).to_json()
        assert sio.dumps(back) == raw

    @settings(max_examples=30)
    @given(seeds)
    def test_generated_round_trip(self, seed):
        g = gen_chain_complex(GenConfig(seed=seed, n=3, max_dim=4))
        s = gen_symplectic(GenConfig(seed=seed, n=2, max_dim=5), "mixed")
        e = gen_ses(GenConfig(seed=seed, n=2, max_dim=4))
        texts = [
            sio.dumps(sio.Instance(g.complex, None, g.chain_bases, g.homology_bases).to_json()),
            sio.dumps(sio.Instance(s.base, s.pairings).to_json()),
        ]
        for t in texts:
            assert sio.dumps(sio.instance_from_json(sio.loads(t)).to_json()) == t
        t = sio.dumps(sio.SESInstance(e.ses, e.chain_A, e.chain_B, e.chain_D).to_json())
        assert sio.dumps(sio.ses_from_json(sio.loads(t)).to_json()) == t

    def test_lower_half_pairings_accepted(self):
        obj = sio.loads(fx("valid.json").read_text())
        obj["pairings"] = obj["pairings"][:2]
        assert sio.instance_from_json(obj).to_json()["pairings"] == sio.loads(fx("valid.json").read_text())["pairings"]

    @pytest.mark.parametrize("mutate,needle", [
        (lambda o: o.update(format_version="2"), "format_version"),
        (lambda o: o.update(dims=[1, 2]), "dims"),
        (lambda o: o["boundaries"][0][0].__setitem__(0, "1.5"), "boundaries"),
        (lambda o: o.update(extra=1), "extra"),
    ])
    def test_parse_errors_name_the_field(self, mutate, needle):
        obj = sio.loads(fx("valid.json").read_text())
        mutate(obj)
        with pytest.raises(sio.ParseError, match=needle):
            sio.instance_from_json(obj)
