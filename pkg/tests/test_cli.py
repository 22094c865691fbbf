import json
import shutil
from pathlib import Path

import pytest

from asphere.cli import dispatch
from asphere.fixtures import DEFAULT_DIR, monoid_corpus, monoid_to_json


@pytest.fixture
def tmp_files(tmp_path):
    return tmp_path


def run(capsys, *argv):
    code = dispatch(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_monoid(path, name="cyc_1_2"):
    path.write_text(json.dumps(monoid_to_json(monoid_corpus()[name])))
    return str(path)


PRES = str(DEFAULT_DIR / "klein.pres")
LOT = str(DEFAULT_DIR / "lot3.pres")


class TestExitCodes:
    def test_word_reduce(self, capsys):
        code, out, _ = run(capsys, "word", "reduce", "--gens", "a b", "a a^-1 b")
        assert code == 0 and out.strip() == "b"

    def test_parse_error_is_three(self, capsys, tmp_files):
        bad = tmp_files / "bad.pres"
        bad.write_text("group X\ngens a\nrel r = a c\n")
        code, _, err = run(capsys, "present", "validate", str(bad))
        assert code == 3 and "line 3" in err

    def test_missing_file_is_three(self, capsys):
        code, _, _ = run(capsys, "present", "validate", "/nonexistent.pres")
        assert code == 3

    def test_usage_error_is_three(self, capsys):
        code, _, _ = run(capsys, "present", "solve", PRES)  # missing --gen
        assert code == 3

    def test_exhausted_is_two(self, capsys, tmp_files):
        free = tmp_files / "free.pres"
        free.write_text("group F\ngens a\n")
        code, out, _ = run(capsys, "present", "cosets", str(free), "--budget", "50")
        assert code == 2 and out.strip() == "Exhausted"

    def test_cosets_index(self, capsys):
        code, out, _ = run(capsys, "--json", "present", "cosets", str(DEFAULT_DIR / "sym3.pres"))
        assert code == 0 and json.loads(out)["index"] == 6


class TestMonoidCommands:
    def test_validate(self, capsys, tmp_files):
        path = write_monoid(tmp_files / "m.json")
        code, out, _ = run(capsys, "--json", "monoid", "validate", path)
        assert code == 0 and json.loads(out)["size"] == 3

    def test_dominion_of_trivial_submonoid(self, capsys, tmp_files):
        path = write_monoid(tmp_files / "m.json")
        code, out, _ = run(capsys, "--json", "monoid", "dominion", path, "--u", "0")
        assert code == 0 and json.loads(out)["dominion"] == [0]

    def test_tensor_classes(self, capsys, tmp_files):
        path = write_monoid(tmp_files / "m.json")
        code, out, _ = run(capsys, "--json", "monoid", "tensor", path, "--u", "0")
        assert code == 0 and json.loads(out)["classes"] == 9

    def test_wdom_no_is_one(self, capsys, tmp_files):
        path = write_monoid(tmp_files / "m.json")
        code, out, _ = run(capsys, "monoid", "wdom", path, "--u", "0", "--d", "1", "--budget", "100")
        assert code == 1 and out.strip() == "no"

    def test_wdom_yes_is_zero(self, capsys, tmp_files):
        path = write_monoid(tmp_files / "m.json")
        code, out, _ = run(capsys, "monoid", "wdom", path, "--u", "0", "--d", "0", "--budget", "100")
        assert code == 0 and out.strip() == "yes"

    def test_wdom_unknown_is_two(self, capsys, tmp_files):
        path = write_monoid(tmp_files / "m.json")
        code, out, _ = run(capsys, "monoid", "wdom", path, "--u", "0", "--d", "1", "--budget", "1")
        assert code == 2 and out.strip() == "unknown"


class TestPeifferCommands:
    def scrambled(self, capsys, tmp_files, k=4):
        code, out, _ = run(
            capsys, "--json", "peiffer", "scramble", PRES, "--seed", "5", "--k", str(k)
        )
        assert code == 0
        data = json.loads(out)
        seq = tmp_files / "seq.json"
        seq.write_text(json.dumps(data["sequence"]))
        cert = tmp_files / "cert.json"
        cert.write_text(json.dumps(data["certificate"]))
        return data, str(seq), str(cert)

    def test_scramble_reports_seed(self, capsys, tmp_files):
        data, _, _ = self.scrambled(capsys, tmp_files)
        assert data["seed"] == 5

    def test_boundary_and_check(self, capsys, tmp_files):
        _, seq, _ = self.scrambled(capsys, tmp_files)
        code, out, _ = run(capsys, "--json", "peiffer", "boundary", PRES, seq)
        assert code == 0 and json.loads(out)["boundary"] == "1"
        code, _, _ = run(capsys, "peiffer", "check", PRES, seq)
        assert code == 0

    def test_check_refutes_non_identity(self, capsys, tmp_files):
        seq = tmp_files / "one.json"
        seq.write_text(json.dumps([{"rel": "r", "conj": "1", "sign": 1}]))
        code, _, _ = run(capsys, "peiffer", "check", PRES, str(seq))
        assert code == 1

    def test_search_verify_round_trip(self, capsys, tmp_files):
        _, seq, _ = self.scrambled(capsys, tmp_files)
        code, out, _ = run(
            capsys, "--json", "peiffer", "search", PRES, seq, "--budget", "50000", "--depth", "8"
        )
        assert code == 0
        found = tmp_files / "found.json"
        found.write_text(json.dumps(json.loads(out)["certificate"]))
        code, out, _ = run(capsys, "peiffer", "verify", PRES, seq, str(found))
        assert code == 0 and out.strip() == "verified"

    def test_verify_rejects_broken_certificate(self, capsys, tmp_files):
        _, seq, _ = self.scrambled(capsys, tmp_files)
        broken = tmp_files / "broken.json"
        broken.write_text(json.dumps({"pool_spec": "", "moves": [{"kind": "Delete", "pos": 99}]}))
        code, out, _ = run(capsys, "--json", "peiffer", "verify", PRES, seq, str(broken))
        assert code == 1 and json.loads(out)["failed_step"] == 0

    def test_search_exhausted_is_two(self, capsys, tmp_files):
        _, seq, _ = self.scrambled(capsys, tmp_files, k=6)
        code, out, _ = run(
            capsys, "peiffer", "search", PRES, seq, "--budget", "2", "--depth", "1"
        )
        assert code == 2 and out.strip() == "Exhausted"

    def test_fiber(self, capsys, tmp_files):
        _, seq, _ = self.scrambled(capsys, tmp_files)
        code, out, _ = run(capsys, "--json", "peiffer", "fiber", PRES, seq, "--n0", "a b a b^-1")
        assert code == 0
        data = json.loads(out)
        assert len(data["sequence"]) == 2 * len(json.loads(Path(seq).read_text()))


class TestRelmodCommand:
    def test_gmap_free_oracle(self, capsys, tmp_files):
        seq = tmp_files / "seq.json"
        seq.write_text(
            json.dumps(
                [
                    {"rel": "r", "conj": "a", "sign": 1},
                    {"rel": "r", "conj": "a", "sign": -1},
                ]
            )
        )
        code, out, _ = run(capsys, "--json", "relmod", "gmap", PRES, str(seq))
        assert code == 0 and json.loads(out)["image"] == {"r": {"a": 2}}

    def test_gmap_coset_oracle_canonicalizes(self, capsys, tmp_files):
        seq = tmp_files / "seq.json"
        seq.write_text(json.dumps([{"rel": "r", "conj": "a a a", "sign": 1}]))
        c3 = str(DEFAULT_DIR / "c3.pres")
        code, out, _ = run(capsys, "--json", "relmod", "gmap", c3, str(seq), "--oracle", "cosets")
        assert code == 0 and json.loads(out)["image"] == {"r": {"1": 1}}

    def test_gmap_abelian_oracle_keeps_raw_keys(self, capsys, tmp_files):
        seq = tmp_files / "seq.json"
        seq.write_text(json.dumps([{"rel": "r", "conj": "a b", "sign": -1}]))
        code, out, _ = run(capsys, "--json", "relmod", "gmap", PRES, str(seq), "--oracle", "abelian")
        assert code == 0 and json.loads(out)["image"] == {"r": {"a b": 1}}

    def test_gmap_signed_variant(self, capsys, tmp_files):
        seq = tmp_files / "seq.json"
        seq.write_text(json.dumps([{"rel": "r", "conj": "a", "sign": -1}]))
        code, out, _ = run(capsys, "--json", "relmod", "gmap", PRES, str(seq), "--signed")
        assert code == 0 and json.loads(out)["image"] == {"r": {"a": -1}}


class TestMiscCommands:
    def test_present_hat(self, capsys, tmp_files):
        mp = tmp_files / "m.pres"
        mp.write_text("monoid M\ngens p q\nrel p q = 1\n")
        code, out, _ = run(capsys, "present", "hat", str(mp))
        assert code == 0 and "rel h1 = p q" in out

    def test_present_lot(self, capsys):
        code, out, _ = run(capsys, "present", "lot", "--n", "3", "--edges", "2,3,1;3,3,2")
        assert code == 0 and "rel r1 = x3 x1 x3^-1 x2^-1" in out

    def test_present_lot_rejects_cycles(self, capsys):
        code, _, _ = run(capsys, "present", "lot", "--n", "2", "--edges", "1,2,2;2,1,1")
        assert code == 3

    def test_word_subcommands(self, capsys):
        code, out, _ = run(capsys, "word", "conjugate", "--gens", "a b", "a", "b")
        assert code == 0 and out.strip() == "a b a^-1"
        code, out, _ = run(capsys, "word", "exponent", "--gens", "a b", "a a b^-1 a", "--gen", "a")
        assert code == 0 and out.strip() == "3"
        code, out, _ = run(capsys, "word", "abelianize", "--gens", "a b", "a a b^-1")
        assert code == 0 and out.strip() == "2 -1"


class TestXmodCommands:
    def test_check_passes(self, capsys):
        code, out, _ = run(capsys, "--json", "xmod", "check", LOT, "--samples", "10", "--seed", "3")
        assert code == 0
        data = json.loads(out)
        assert data["passed"] and data["seed"] == 3

    def test_project(self, capsys, tmp_files):
        code, out, _ = run(capsys, "--json", "peiffer", "scramble", LOT, "--seed", "2", "--k", "3")
        seq = tmp_files / "seq.json"
        seq.write_text(json.dumps(json.loads(out)["sequence"]))
        code, out, _ = run(capsys, "--json", "xmod", "project", LOT, str(seq))
        assert code == 0 and json.loads(out)["kernel_component"] == "1"


class TestSuiteCommand:
    def test_smoke_mode(self, capsys):
        code, out, _ = run(capsys, "--json", "suite", "--samples", "1")
        assert code == 0 and json.loads(out)["passed"]

    def test_byte_determinism(self, capsys):
        _, out1, _ = run(capsys, "--json", "suite", "--samples", "2", "--seed", "9")
        _, out2, _ = run(capsys, "--json", "suite", "--samples", "2", "--seed", "9")
        assert out1 == out2

    def test_missing_fixture_is_three(self, capsys, tmp_files):
        code, _, err = run(capsys, "suite", "--samples", "1", "--fixtures", str(tmp_files))
        assert code == 3 and "missing fixture" in err

    def test_corrupted_fixture_fails(self, capsys, tmp_files):
        # a loadable but wrong fixture flips the exact-value probe
        for f in DEFAULT_DIR.iterdir():
            shutil.copy(f, tmp_files / f.name)
        (tmp_files / "c3.pres").write_text("group c3\ngens a\nrel r = a a a a\n")
        code, _, _ = run(capsys, "suite", "--samples", "1", "--fixtures", str(tmp_files))
        assert code == 1
