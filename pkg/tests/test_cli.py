import json
from fractions import Fraction

import pytest

from otdp.cli import main

PAPER_INSTANCE = {
    "marginals": [{"support": ["0", "1"], "probs": ["1/2", "1/2"]}],
    "target": {"y1": ["1"], "y2": ["2"], "t": "0"},
}


@pytest.fixture
def instance_file(tmp_path):
    def write(document, name="instance.json"):
        path = tmp_path / name
        path.write_text(json.dumps(document))
        return str(path)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, f"expected success, got {code}: {err}"
    lines = [line for line in out.splitlines() if line]
    assert len(lines) == 1, f"expected exactly one JSON line, got {out!r}"
    return json.loads(lines[0])


class TestExact:
    def test_paper_example(self, capsys, instance_file):
        body = run_json(capsys, "exact", instance_file(PAPER_INSTANCE))
        assert body["value_rational"] == "5/2"
        assert body["value_decimal"] == 2.5
        assert body["mode"] == "exact"
        assert body["grid_N"] == 2

    def test_half_mix_variant(self, capsys, instance_file):
        doc = dict(PAPER_INSTANCE, target={"y1": ["1"], "y2": ["2"], "t": "1/2"})
        body = run_json(capsys, "exact", instance_file(doc))
        assert body["value_rational"] == "1"
        assert body["n_t"] == 0

    def test_malformed_probs_exit_2(self, capsys, instance_file):
        doc = {
            "marginals": [{"support": ["0", "1"], "probs": ["1/2", "1/3"]}],
            "target": PAPER_INSTANCE["target"],
        }
        code, out, err = run(capsys, "exact", instance_file(doc))
        assert code == 2 and out == "" and err

    def test_unparseable_file_exit_2(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        code, out, _ = run(capsys, "exact", str(path))
        assert code == 2 and out == ""

    def test_missing_file_exit_2(self, capsys):
        code, _, _ = run(capsys, "exact", "/nonexistent/instance.json")
        assert code == 2

    def test_grid_cap_exit_3(self, capsys, instance_file, monkeypatch):
        monkeypatch.setenv("OTDP_MAX_GRID", "4")
        doc = {
            "marginals": [
                {"support": ["0", "1/997"], "probs": ["1/2", "1/2"]},
                {"support": ["0", "1"], "probs": ["1/2", "1/2"]},
            ],
            "target": {"y1": ["1", "1"], "y2": ["0", "0"], "t": "1/2"},
        }
        code, out, err = run(capsys, "exact", instance_file(doc))
        assert code == 3 and out == ""


class TestBrute:
    def test_p4(self, capsys, instance_file):
        body = run_json(capsys, "brute", instance_file(PAPER_INSTANCE), "--p", "4")
        assert body["value_rational"] == "17/2"

    def test_agrees_with_exact(self, capsys, instance_file):
        doc = dict(PAPER_INSTANCE, target={"y1": ["1"], "y2": ["2"], "t": "7/16"})
        path = instance_file(doc)
        exact = run_json(capsys, "exact", path)
        brute = run_json(capsys, "brute", path)
        assert exact["value_rational"] == brute["value_rational"]

    def test_float_mode_has_no_rational_field(self, capsys, instance_file):
        body = run_json(
            capsys,
            "brute",
            instance_file(PAPER_INSTANCE),
            "--mode",
            "float",
            "--p",
            "1.5",
        )
        assert "value_rational" not in body
        assert body["mode"] == "float"
        assert body["value_decimal"] == pytest.approx(0.5 * (1 + 2**1.5))

    def test_atom_cap_exit_4(self, capsys, instance_file):
        doc = {
            "marginals": [{"support": ["0", "1"], "probs": ["1/2", "1/2"]}] * 2,
            "target": {"y1": ["0", "0"], "y2": ["1", "1"], "t": "1/2"},
        }
        code, out, _ = run(capsys, "brute", instance_file(doc), "--cap", "2")
        assert code == 4 and out == ""

    def test_odd_p_exact_exit_2(self, capsys, instance_file):
        code, _, _ = run(capsys, "brute", instance_file(PAPER_INSTANCE), "--p", "3")
        assert code == 2


class TestApprox:
    def test_lattice_aligned_matches_exact(self, capsys, instance_file):
        path = instance_file(PAPER_INSTANCE)
        approx = run_json(capsys, "approx", path, "--eps", "1/10")
        exact = run_json(capsys, "exact", path)
        assert approx["value_rational"] == exact["value_rational"]
        assert approx["mode"] == "approx"
        assert "error_bound" in approx

    def test_thirds_instance_within_eps(self, capsys, instance_file):
        doc = {
            "marginals": [{"support": ["1/3", "2/3"], "probs": ["1/2", "1/2"]}],
            "target": {"y1": ["0"], "y2": ["1"], "t": "1/2"},
        }
        path = instance_file(doc)
        approx = run_json(capsys, "approx", path, "--eps", "1/10")
        exact = run_json(capsys, "exact", path)
        gap = abs(
            Fraction(approx["value_rational"]) - Fraction(exact["value_rational"])
        )
        assert gap <= Fraction(1, 10)

    def test_zero_eps_exit_2(self, capsys, instance_file):
        code, out, _ = run(
            capsys, "approx", instance_file(PAPER_INSTANCE), "--eps", "0"
        )
        assert code == 2 and out == ""


class TestCount:
    def test_via_both(self, capsys):
        body = run_json(
            capsys, "count", "--weights", "1,2,3", "--capacity", "3", "--via", "both"
        )
        assert body["value_rational"] == "5"
        assert body["oracle_calls"] <= 8

    def test_via_ot_budget(self, capsys):
        body = run_json(
            capsys, "count", "--weights", "2,2", "--capacity", "1", "--via", "ot"
        )
        assert body["value_rational"] == "1"
        assert body["oracle_calls"] <= 4

    def test_via_dp_has_no_calls_field(self, capsys):
        body = run_json(
            capsys, "count", "--weights", "2,2", "--capacity", "1", "--via", "dp"
        )
        assert body["value_rational"] == "1"
        assert "oracle_calls" not in body

    def test_empty_weights(self, capsys):
        body = run_json(capsys, "count", "--weights", "", "--capacity", "0")
        assert body["value_rational"] == "1"

    def test_small_noise_still_agrees(self, capsys):
        body = run_json(
            capsys,
            "count",
            "--weights", "3,1,4",
            "--capacity", "5",
            "--via", "both",
            "--noise", "1/1000",
        )
        assert body["value_rational"] == "6"

    def test_huge_noise_disagrees_exit_5(self, capsys):
        code, out, err = run(
            capsys,
            "count",
            "--weights", "2",
            "--capacity", "1",
            "--via", "both",
            "--noise", "10",
        )
        assert code == 5 and out == "" and "count" in err

    def test_negative_weight_exit_2(self, capsys):
        code, _, _ = run(capsys, "count", "--weights", "1,-2", "--capacity", "3")
        assert code == 2

    def test_bad_weight_list_exit_2(self, capsys):
        code, _, _ = run(capsys, "count", "--weights", "1,x", "--capacity", "3")
        assert code == 2


class TestPlan:
    def test_threshold_atom_goes_to_y2(self, capsys, instance_file):
        doc = dict(PAPER_INSTANCE, target={"y1": ["1"], "y2": ["2"], "t": "1/2"})
        body = run_json(capsys, "plan", instance_file(doc), "--atom", "1")
        assert body == {
            "threshold": "-1",
            "fraction": "0",
            "pi1": "0",
            "pi2": "1/2",
        }

    def test_above_threshold_atom_goes_to_y1(self, capsys, instance_file):
        doc = dict(PAPER_INSTANCE, target={"y1": ["1"], "y2": ["2"], "t": "1/2"})
        body = run_json(capsys, "plan", instance_file(doc), "--atom", "0")
        assert (body["pi1"], body["pi2"]) == ("1/2", "0")

    def test_atom_masses_sum_to_t(self, capsys, instance_file):
        doc = {
            "marginals": [
                {"support": ["0", "1"], "probs": ["1/4", "3/4"]},
                {"support": ["-1", "2"], "probs": ["2/3", "1/3"]},
            ],
            "target": {"y1": ["0", "1"], "y2": ["1", "-1"], "t": "5/7"},
        }
        path = instance_file(doc)
        total = Fraction(0)
        for i in range(2):
            for j in range(2):
                body = run_json(capsys, "plan", path, "--atom", f"{i},{j}")
                total += Fraction(body["pi1"])
        assert total == Fraction(5, 7)

    def test_out_of_range_atom_exit_2(self, capsys, instance_file):
        doc = dict(PAPER_INSTANCE, target={"y1": ["1"], "y2": ["2"], "t": "1/2"})
        code, _, _ = run(capsys, "plan", instance_file(doc), "--atom", "7")
        assert code == 2

    def test_endpoint_t_exit_2(self, capsys, instance_file):
        code, _, _ = run(
            capsys, "plan", instance_file(PAPER_INSTANCE), "--atom", "0"
        )
        assert code == 2
