import json

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

import rsgame as rs
from rsgame.cli import main

# sha256 of the bundled fixture's canonical serialization; pins both the
# fixture and the file format
G2_DIGEST = "d41c13612c2b92cb2244a25fd4fc1db02593874dd2442dc16cf8eb159c24e041"


@pytest.fixture()
def g2_path(tmp_path, g2):
    path = tmp_path / "g2.json"
    rs.save_instance(g2, path)
    return str(path)


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    report = json.loads(captured.out) if captured.out.strip() else None
    return code, report, captured.err


class TestGen:
    def test_fixture_roundtrips_bit_exact(self, tmp_path, capsys, g2):
        out = tmp_path / "fixture.json"
        code = main(["gen", "--fixture", "g2", "-o", str(out)])
        assert code == 0
        loaded = rs.load_instance(out)
        assert_array_equal(loaded.transition, g2.transition)
        assert_array_equal(loaded.cost1, g2.cost1)
        assert rs.instance_digest(loaded) == G2_DIGEST

    def test_random_instance_to_stdout_validates(self, capsys):
        code = main(["gen", "--seed", "3", "--states", "4"])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        inst = rs.instance_from_dict(doc)
        assert inst.n_states == 4
        assert rs.validate(inst, min_prob=0.02).passed

    def test_arat_flag_embeds_decomposition(self, capsys):
        code = main(["gen", "--seed", "1", "--states", "2", "--arat"])
        assert code == 0
        inst = rs.instance_from_dict(json.loads(capsys.readouterr().out))
        assert inst.arat is not None
        diag = rs.validate(inst, min_prob=1e-6)
        assert diag.checks["4.1"].status == "PASS"

    def test_unwritable_path_exits_3(self, capsys):
        code = main(["gen", "--fixture", "g2", "-o", "/nonexistent/dir/x.json"])
        assert code == 3
        assert "error" in capsys.readouterr().err


class TestValidateCommand:
    def test_fixture_passes(self, g2_path, capsys):
        code, report, err = run(["validate", "--instance", g2_path], capsys)
        assert code == 0
        assert err == ""
        assert report["command"] == "validate"
        assert report["version"] == rs.__version__
        assert report["instance_digest"] == G2_DIGEST
        assert report["passed"] is True
        assert report["delta"] == pytest.approx(0.4, abs=1e-14)
        assert report["kappa"] == pytest.approx(1.5, abs=1e-14)
        assert isinstance(report["wall_clock_s"], float)
        # every check is present with a status
        assert set(report["checks"]) == {"1", "2(i)", "2(ii)", "3.1", "3.2", "4.1", "4.2"}
        assert all(c["status"] == "PASS" for c in report["checks"].values())

    def test_failing_instance_exits_1_and_names_assumptions(self, tmp_path, capsys):
        t = np.zeros((2, 1, 1, 2))
        t[0, 0, 0, 0] = 1.0
        t[1, 0, 0, 1] = 1.0
        inst = rs.GameInstance(t, np.zeros((2, 1, 1)), np.zeros((2, 1, 1)))
        path = tmp_path / "bad.json"
        rs.save_instance(inst, path)
        code, report, err = run(["validate", "--instance", str(path)], capsys)
        assert code == 1
        assert report["passed"] is False
        assert "Assumption 2(i):" in err
        assert "Assumption 2(ii):" in err
        assert "Assumption 3.2:" in err
        # infinities stringify rather than breaking the JSON report
        assert report["kappa"] == "inf"
        assert report["span_bound"] == "inf"

    def test_min_prob_flag_is_honored_and_recorded(self, g2_path, capsys):
        code, report, err = run(
            ["validate", "--instance", g2_path, "--min-prob", "0.21"], capsys
        )
        assert code == 1
        assert report["checks"]["2(ii)"]["status"] == "FAIL"
        assert report["flags"]["min_prob"] == 0.21
        code, _, _ = run(
            ["validate", "--instance", g2_path, "--min-prob", "0"], capsys
        )
        assert code == 2  # nonpositive floor is a usage error


class TestSolveCommand:
    def test_uniform_opponent_literal(self, g2_path, capsys):
        code, report, err = run(
            ["solve", "--instance", g2_path, "--player", "2",
             "--opponent", "uniform"],
            capsys,
        )
        assert code == 0
        assert report["rho"] == pytest.approx(0.26999347135527801, abs=1e-12)
        assert_allclose(report["v"], [0.0, 0.090907309999831043], atol=1e-12)
        assert report["selector"] == [1, 1]
        assert report["tied_actions"] == [[1], [1]]
        assert report["converged"] is True
        assert report["residual"] < 1e-12

    def test_opponent_strategy_file(self, g2_path, tmp_path, capsys, g2):
        psi = rs.pure_strategy(g2, 2, [1, 1])
        psi_path = tmp_path / "psi.json"
        rs.save_strategy(psi, psi_path)
        code, report, err = run(
            ["solve", "--instance", g2_path, "--player", "1",
             "--opponent", str(psi_path)],
            capsys,
        )
        assert code == 0
        # player 1's reply to the equilibrium strategy attains its J1
        assert report["rho"] == pytest.approx(0.49771664669626348, abs=1e-10)

    def test_iteration_cap_exits_1(self, g2_path, capsys):
        code, report, err = run(
            ["solve", "--instance", g2_path, "--player", "2",
             "--opponent", "uniform", "--max-iter", "2"],
            capsys,
        )
        assert code == 1
        assert report["converged"] is False
        assert "did not reach" in err

    def test_wrong_player_strategy_file_exits_3(self, g2_path, tmp_path, capsys, g2):
        phi = rs.uniform_strategy(g2, 1)
        path = tmp_path / "phi.json"
        rs.save_strategy(phi, path)
        # solving for player 1 needs a player-2 opponent file
        code, report, err = run(
            ["solve", "--instance", g2_path, "--player", "1",
             "--opponent", str(path)],
            capsys,
        )
        assert code == 3
        assert "player" in err


class TestEvalCommand:
    def test_uniform_pair_values(self, g2_path, capsys):
        code, report, err = run(
            ["eval", "--instance", g2_path, "--phi", "uniform", "--psi", "uniform"],
            capsys,
        )
        assert code == 0
        assert report["J1"] == pytest.approx(0.57822022429909892, abs=1e-13)
        assert report["J2"] == pytest.approx(0.56219208143496413, abs=1e-13)
        assert "finite_horizon" not in report
        assert "mc" not in report

    def test_horizon_and_mc_sections(self, g2_path, capsys):
        code, report, err = run(
            ["eval", "--instance", g2_path, "--phi", "uniform", "--psi", "uniform",
             "--horizon", "50", "--mc", "--paths", "2000", "--seed", "7"],
            capsys,
        )
        assert code == 0
        fh = report["finite_horizon"]
        assert fh["n"] == 50
        assert fh["x"] == 0
        mc = report["mc"]["player2"]
        assert mc["n_paths"] == 2000
        assert abs(mc["value"] - fh["growth2"]) <= 4.0 * mc["std_error"]

    def test_mc_without_horizon_is_usage_error(self, g2_path, capsys):
        code, report, err = run(
            ["eval", "--instance", g2_path, "--phi", "uniform", "--psi", "uniform",
             "--mc"],
            capsys,
        )
        assert code == 2
        assert "--horizon" in err

    def test_theta_override_changes_values_and_digest(self, g2_path, capsys):
        _, base, _ = run(
            ["eval", "--instance", g2_path, "--phi", "uniform", "--psi", "uniform"],
            capsys,
        )
        code, hot, err = run(
            ["eval", "--instance", g2_path, "--theta", "2.0",
             "--phi", "uniform", "--psi", "uniform"],
            capsys,
        )
        assert code == 0
        assert hot["J2"] > base["J2"]
        # the digest identifies the instance actually evaluated
        assert hot["instance_digest"] != base["instance_digest"]
        assert hot["flags"]["theta"] == 2.0


class TestNashCommand:
    def test_dynamics_certify_fixture(self, g2_path, capsys):
        code, report, err = run(["nash", "--instance", g2_path], capsys)
        assert code == 0
        assert report["converged"] is True
        assert report["verified"] is True
        assert report["max_gap"] <= 1e-6
        assert report["rounds"] <= 30
        phi_rows = np.array(report["phi"]["rows"])
        assert np.all(phi_rows[:, 0] >= 0.999)

    def test_round_cap_exits_1(self, g2_path, capsys):
        code, report, err = run(
            ["nash", "--instance", g2_path, "--eps", "1e-18", "--rounds", "5"],
            capsys,
        )
        assert code == 1
        assert report["converged"] is False
        assert "did not certify" in err

    def test_warm_start_files(self, g2_path, tmp_path, capsys, g2):
        phi = rs.pure_strategy(g2, 1, [0, 0])
        psi = rs.pure_strategy(g2, 2, [1, 1])
        phi_path, psi_path = tmp_path / "phi.json", tmp_path / "psi.json"
        rs.save_strategy(phi, phi_path)
        rs.save_strategy(psi, psi_path)
        code, report, err = run(
            ["nash", "--instance", g2_path,
             "--phi0", str(phi_path), "--psi0", str(psi_path)],
            capsys,
        )
        assert code == 0
        assert report["rounds"] == 0  # already an equilibrium at entry


class TestBruteCommand:
    def test_coarse_grid_report(self, g2_path, capsys):
        code, report, err = run(
            ["brute", "--instance", g2_path, "--grid", "0.5", "--eps", "0.3",
             "--top", "2"],
            capsys,
        )
        assert code == 0
        assert report["searched_pairs"] == 81
        assert report["survivors"] == 43
        assert len(report["certificates"]) == 2
        assert report["existence"].startswith("existence guaranteed")
        best = report["certificates"][0]
        assert best["eps1"] <= 1e-12
        assert best["eps2"] <= 1e-12

    def test_oversized_grid_is_usage_error(self, g2_path, capsys):
        code, report, err = run(
            ["brute", "--instance", g2_path, "--grid", "0.01"], capsys
        )
        assert code == 2
        assert "grid" in err


class TestErrorPaths:
    def test_missing_instance_file(self, capsys):
        code, report, err = run(
            ["validate", "--instance", "/no/such/file.json"], capsys
        )
        assert code == 3
        assert "error" in err

    def test_unparseable_document_reports_location(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{bad json")
        code, report, err = run(["validate", "--instance", str(path)], capsys)
        assert code == 3
        assert "line 1" in err and "column" in err

    def test_semantically_invalid_document(self, tmp_path, capsys):
        path = tmp_path / "wrong.json"
        path.write_text(json.dumps({"theta": 1.0}))
        code, report, err = run(["validate", "--instance", str(path)], capsys)
        assert code == 3
        assert "transition" in err

    def test_usage_errors_exit_2(self, g2_path, capsys):
        assert main(["frobnicate"]) == 2
        assert main(["solve", "--instance", g2_path]) == 2  # missing --opponent
        assert main(
            ["solve", "--instance", g2_path, "--player", "3", "--opponent", "uniform"]
        ) == 2
        capsys.readouterr()

    def test_unwritable_report_path(self, g2_path, capsys):
        code = main(
            ["validate", "--instance", g2_path, "-o", "/nonexistent/dir/report.json"]
        )
        assert code == 3
        capsys.readouterr()

    def test_version_flag(self, capsys):
        assert main(["--version"]) == 0
        assert rs.__version__ in capsys.readouterr().out


class TestReportDeterminism:
    def test_identical_runs_differ_only_in_wall_clock(self, g2_path, tmp_path):
        out = tmp_path / "report.json"
        argv = ["nash", "--instance", g2_path, "-o", str(out)]
        assert main(argv) == 0
        first = json.loads(out.read_text())
        assert main(argv) == 0
        second = json.loads(out.read_text())
        first.pop("wall_clock_s")
        second.pop("wall_clock_s")
        assert first == second

    def test_seeded_mc_reports_are_reproducible(self, g2_path, tmp_path):
        out = tmp_path / "report.json"
        argv = [
            "eval", "--instance", g2_path, "--phi", "uniform", "--psi", "uniform",
            "--horizon", "20", "--mc", "--paths", "500", "--seed", "42",
            "-o", str(out),
        ]
        assert main(argv) == 0
        first = json.loads(out.read_text())
        assert main(argv) == 0
        second = json.loads(out.read_text())
        assert first["mc"] == second["mc"]

    def test_flags_record_the_full_invocation(self, g2_path, capsys):
        code, report, err = run(
            ["solve", "--instance", g2_path, "--player", "2",
             "--opponent", "uniform", "--threads", "4"],
            capsys,
        )
        assert code == 0
        flags = report["flags"]
        assert flags["instance"] == g2_path
        assert flags["player"] == 2
        assert flags["opponent"] == "uniform"
        assert flags["threads"] == 4
        assert flags["tol"] == 1e-12
        assert flags["max_iter"] == 100000
        assert "command" not in flags

    def test_reports_roundtrip_seventeen_digit_floats(self, g2_path, capsys):
        code, report, err = run(
            ["eval", "--instance", g2_path, "--phi", "uniform", "--psi", "uniform"],
            capsys,
        )
        # the serialized decimal parses back to the library's float, bit for bit
        inst = rs.load_instance(g2_path)
        phi = rs.uniform_strategy(inst, 1)
        psi = rs.uniform_strategy(inst, 2)
        assert report["J1"] == rs.ergodic_cost(inst, 1, phi, psi)
        assert report["J2"] == rs.ergodic_cost(inst, 2, phi, psi)
