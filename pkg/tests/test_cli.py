import json

import numpy as np
import pytest

import ssfem.cli as cli
from ssfem.config import build_config, load_config
from ssfem.errors import ConfigError, SolverError
from ssfem.field import field_from_csv
from ssfem.mesh import save_mesh, structured_mesh


class TestConfig:
    def test_defaults(self):
        cfg = build_config()
        assert cfg.L == 3 and cfg.p_u == 3
        assert cfg.input_order() == 6
        assert cfg.solver_tol(1e-8) == 1e-8

    def test_explicit_input_order_and_tolerance(self):
        cfg = build_config(overrides={"p_a": 4, "tol": 1e-6})
        assert cfg.input_order() == 4
        assert cfg.solver_tol(1e-8) == 1e-6

    def test_file_and_override_precedence(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("# run settings\nnx = 8\nsigma = 0.25\nlevel=4\n")
        cfg = build_config(load_config(path), {"sigma": 0.5})
        assert cfg.nx == 8
        assert cfg.level == 4
        assert cfg.sigma == 0.5

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("nz = 8\n")
        with pytest.raises(ConfigError, match="unknown config key"):
            load_config(path)

    def test_unparseable_value_rejected(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("nx = eight\n")
        with pytest.raises(ConfigError):
            build_config(load_config(path))

    def test_invalid_combination_rejected(self):
        with pytest.raises(ConfigError):
            build_config(overrides={"L": 0})
        with pytest.raises(ConfigError):
            build_config(overrides={"tol": -1e-8})

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.cfg")


class TestReports:
    def test_kle_report_prints_tables(self, capsys):
        assert cli.main(["kle-report", "--n", "7"]) == 0
        out = capsys.readouterr().out
        assert "1.3065" in out and "0.7388" in out
        assert "0.5458" in out and "0.0158" in out

    def test_grid_report_lists_all_points(self, capsys):
        assert cli.main(["grid-report", "--dim", "2", "--level", "3"]) == 0
        out = capsys.readouterr().out
        assert "points=13" in out
        assert "1.3333" in out


class TestSolveCommands:
    def test_solve_det_writes_csv(self, tmp_path, capsys):
        out = tmp_path / "det.csv"
        code = cli.main(
            ["solve-det", "--nx", "8", "--ny", "8", "--L", "2", "--out", str(out)]
        )
        assert code == 0
        field = field_from_csv(out)
        assert field.coeffs.shape == (1, 81)
        assert field.coeffs[0].max() > 0.05

    def test_full_workflow(self, tmp_path, capsys):
        intr = tmp_path / "intrusive.csv"
        nisp = tmp_path / "nisp.csv"
        vtk = tmp_path / "intrusive.vtk"
        report = tmp_path / "report.json"
        stats = tmp_path / "stats.csv"
        common = ["--nx", "5", "--ny", "5", "--L", "2", "--p-u", "2"]
        assert cli.main(["solve-intrusive", *common, "--out", str(intr), "--vtk", str(vtk)]) == 0
        assert cli.main(["solve-nisp", *common, "--level", "3", "--out", str(nisp)]) == 0
        assert cli.main(["compare", str(intr), str(nisp), "--out", str(report)]) == 0
        assert cli.main(["stats", str(intr), "--out", str(stats)]) == 0
        data = json.loads(report.read_text())
        assert data["mean_rel_l2"] < 1e-4
        assert data["std_rel_l2"] < 0.01
        assert vtk.read_text().startswith("# vtk DataFile")
        header = stats.read_text().splitlines()[0]
        assert header == "node,x,y,mean,std"

    def test_config_file_drives_solver(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        out = tmp_path / "sol.csv"
        cfg.write_text("nx=4\nny=4\nL=2\np_u=1\nlevel=2\n")
        assert cli.main(["solve-nisp", "--config", str(cfg), "--out", str(out)]) == 0
        assert field_from_csv(out).coeffs.shape == (3, 25)

    def test_mesh_file_input(self, tmp_path):
        mesh_path = tmp_path / "mesh.txt"
        save_mesh(structured_mesh(4, 4), mesh_path)
        out = tmp_path / "sol.csv"
        code = cli.main(
            ["solve-det", "--mesh", str(mesh_path), "--L", "2", "--out", str(out)]
        )
        assert code == 0
        assert field_from_csv(out).n_nodes == 25

    def test_zero_sigma_degenerates_both_routes(self, tmp_path):
        intr = tmp_path / "intr.csv"
        nisp = tmp_path / "nisp.csv"
        common = ["--nx", "4", "--ny", "4", "--L", "2", "--p-u", "2", "--sigma", "0"]
        assert cli.main(["solve-intrusive", *common, "--out", str(intr)]) == 0
        assert cli.main(["solve-nisp", *common, "--level", "3", "--out", str(nisp)]) == 0
        for path in (intr, nisp):
            field = field_from_csv(path)
            assert np.linalg.norm(field.coeffs[1:]) < 1e-10
            assert field.coeffs[0].max() > 0.0


class TestExitCodes:
    def test_config_error_is_two(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("nz=1\n")
        assert cli.main(["solve-det", "--config", str(cfg)]) == 2

    def test_invalid_value_is_two(self):
        assert cli.main(["solve-det", "--L", "0"]) == 2

    def test_missing_input_file_is_four(self, tmp_path):
        assert cli.main(["compare", str(tmp_path / "a.csv"), str(tmp_path / "b.csv")]) == 4

    def test_bad_mesh_file_is_four(self, tmp_path):
        bad = tmp_path / "mesh.txt"
        bad.write_text("3 1\n0 0\n1 0\n2 0\n0 1 2\n")
        assert cli.main(["solve-det", "--mesh", str(bad), "--out", "x.csv"]) == 4

    def test_solver_failure_is_three(self, monkeypatch):
        def explode(*args, **kwargs):
            raise SolverError("did not converge", iterations=10, residual=1.0)

        monkeypatch.setattr(cli, "solve_deterministic", explode)
        assert cli.main(["solve-det", "--nx", "3", "--ny", "3", "--L", "2"]) == 3
