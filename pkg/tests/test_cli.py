import json

from ssp import groups
from ssp.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestBound:
    def test_headline_values(self, capsys):
        code, out = run(capsys, "bound", "--p", "3", "--alpha", "-1", "--r", "1", "--s", "1", "--N", "3")
        assert code == 0
        rep = json.loads(out)
        res = rep["results"]
        assert res["final_bound"] == {"value": "11520", "provenance": "bound"}
        assert res["asymptotic_exponent"]["value"] == "6"
        assert res["superspecial_bound"]["value"] == "360"
        assert any("Siegel" in n for n in rep["notes"])

    def test_determinism_byte_identical(self, capsys):
        argv = ("bound", "--p", "3", "--alpha", "-1", "--r", "1", "--s", "1", "--N", "3")
        _, out1 = run(capsys, *argv)
        _, out2 = run(capsys, *argv)
        assert out1 == out2

    def test_odd_g_exits_2(self, capsys):
        code, out = run(capsys, "bound", "--p", "3", "--alpha", "-1", "--r", "1", "--s", "2", "--N", "3")
        assert code == 2
        assert "even" in json.loads(out)["results"]["error"]

    def test_p_divides_alpha_exits_2(self, capsys):
        code, out = run(capsys, "bound", "--p", "3", "--alpha", "-3", "--r", "1", "--s", "1", "--N", "3")
        assert code == 2

    def test_split_prime_names_violation(self, capsys):
        code, out = run(capsys, "bound", "--p", "5", "--alpha", "-1", "--r", "1", "--s", "1", "--N", "3")
        assert code == 2
        assert "QR mod p" in json.loads(out)["results"]["error"]

    def test_every_number_carries_provenance(self, capsys):
        _, out = run(capsys, "bound", "--p", "3", "--alpha", "-1", "--r", "1", "--s", "1", "--N", "3")
        for key, entry in json.loads(out)["results"].items():
            assert set(entry) == {"value", "provenance"}, key
            assert entry["provenance"] in ("formula", "enumeration", "bound")

    def test_csv_output(self, capsys):
        code, out = run(capsys, "bound", "--p", "3", "--alpha", "-1", "--r", "1", "--s", "1", "--N", "3", "--csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "name,value,provenance"
        assert any(line.startswith("final_bound,11520,bound") for line in lines)


class TestGroup:
    def test_gusplit_order(self, capsys):
        code, out = run(capsys, "group", "--family", "gusplit", "--params", "1,1,3")
        assert code == 0
        assert json.loads(out)["results"]["order"]["value"] == "32"

    def test_with_oracle(self, capsys):
        code, out = run(capsys, "group", "--family", "su", "--params", "2,3", "--oracle")
        res = json.loads(out)["results"]
        assert res["order"]["value"] == res["order_enumerated"]["value"] == "24"
        assert res["match"] is True

    def test_bad_family(self, capsys):
        code, _ = run(capsys, "group", "--family", "so", "--params", "2,3")
        assert code == 2

    def test_bad_arity(self, capsys):
        code, _ = run(capsys, "group", "--family", "su", "--params", "1,1,3")
        assert code == 2


class TestNewton:
    def test_a_half_fixture(self, tmp_path, capsys):
        spec = {
            "p": 3,
            "s": 2,
            "n": 2,
            "rank": 2,
            "F": [[0, 1], [-3, 0]],
            "V": [[0, -1], [3, 0]],
            "E": [[0, 1], [-1, 0]],
        }
        path = tmp_path / "a_half.json"
        path.write_text(json.dumps(spec))
        code, out = run(capsys, "newton", str(path))
        assert code == 0
        res = json.loads(out)["results"]
        assert res["slopes"]["value"] == "1/2 x2"
        assert res["isoclinic"] is True and res["basic"] is True
        assert res["t_newton"]["value"] == "1" and res["endpoints_equal"] is True

    def test_insufficient_precision_exits_3(self, tmp_path, capsys):
        spec = {
            "p": 3,
            "s": 1,
            "n": 2,
            "rank": 2,
            "F": [[0, 0], [0, 0]],
            "V": [[1, 0], [0, 1]],
        }
        path = tmp_path / "degenerate.json"
        path.write_text(json.dumps(spec))
        code, _ = run(capsys, "newton", str(path))
        assert code == 3

    def test_missing_file_exits_2(self, capsys):
        code, _ = run(capsys, "newton", "no-such-file.json")
        assert code == 2

    def test_bad_json_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        code, _ = run(capsys, "newton", str(path))
        assert code == 2


class TestPairing:
    def test_orders_match(self, capsys):
        code, out = run(capsys, "pairing", "--p", "3", "--alpha", "-1", "--r", "1", "--s", "1")
        assert code == 0
        res = json.loads(out)["results"]
        assert res["aut_order_formula"]["value"] == res["aut_order_enumerated"]["value"] == "32"
        assert res["match"] is True
        assert res["well_definedness_disagreements"]["value"] == "0"

    def test_budget_exits_4(self, capsys, monkeypatch):
        monkeypatch.setenv("SSP_MAX_ENUM", "5")
        code, _ = run(capsys, "pairing", "--p", "3", "--alpha", "-1", "--r", "1", "--s", "1")
        assert code == 4


class TestAmf:
    def fixture_files(self, tmp_path):
        space = {
            "points": 4,
            "generators": [{"name": "c", "perm": [1, 2, 3, 0]}],
            "group": "Z/4",
        }
        rep = {"dim": 1, "field": {"p": 3, "s": 2}, "generators": [[[1]]]}
        sp = tmp_path / "space.json"
        rp = tmp_path / "rep.json"
        sp.write_text(json.dumps(space))
        rp.write_text(json.dumps(rep))
        return str(sp), str(rp)

    def test_trivial_rep_counts_orbits(self, tmp_path, capsys):
        sp, rp = self.fixture_files(tmp_path)
        code, out = run(capsys, "amf", sp, rp)
        assert code == 0
        res = json.loads(out)["results"]
        assert res["dimension"]["value"] == "1"
        assert res["bound_check"] is True


class TestVerify:
    def test_quick_passes(self, capsys):
        code, out = run(capsys, "verify", "--level", "quick")
        assert code == 0
        rep = json.loads(out)
        assert rep["results"]["failed"] == 0
        assert rep["results"]["passed"] >= 12

    def test_fault_injection_names_failing_check(self, capsys, monkeypatch):
        # a GSp order off by one factor of ell must be caught and named
        real = groups.order_gsp_mod
        monkeypatch.setattr(groups, "order_gsp_mod", lambda g, N: real(g, N) * 3)
        code, out = run(capsys, "verify", "--level", "quick")
        assert code == 1
        rep = json.loads(out)
        assert rep["results"]["first_failure"] == "gsp-order-vs-enumeration(1,3)"

    def test_bad_level_exits_2(self, capsys):
        code, _ = run(capsys, "verify", "--level", "bogus")
        assert code == 2


class TestSweep:
    def test_sweep_rows(self, capsys):
        code, out = run(
            capsys, "sweep", "--sweep", "3:13", "--alpha", "-1", "--r", "1", "--s", "1", "--N", "3"
        )
        assert code == 0
        rows = json.loads(out)["results"]["rows"]
        by_p = {r["p"]: r for r in rows}
        assert set(by_p) == {3, 5, 7, 11, 13}
        assert by_p[3]["final_bound"]["value"] == "11520"
        # -1 is a square mod 5 and mod 13: p splits, rows are skipped
        assert by_p[5]["status"] == "skipped" and by_p[13]["status"] == "skipped"
        assert by_p[7]["status"] == by_p[11]["status"] == "ok"

    def test_sweep_csv(self, capsys):
        code, out = run(
            capsys,
            "sweep", "--sweep", "3:7", "--alpha", "-1", "--r", "1", "--s", "1", "--N", "3", "--csv",
        )
        assert code == 0
        assert out.splitlines()[0] == "name,value,provenance"
