import json
import os

import numpy as np
import pytest

from slspec.cli import main
from slspec.prufer import Spectrum


def _run(tmp_path, command, cfg, *flags, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    out = tmp_path / "out"
    code = main([command, str(path), "--out", str(out), *flags])
    return code, out


def test_solve_zero(tmp_path):
    code, out = _run(tmp_path, "solve", {"potential": "zero", "n_max": 5})
    assert code == 0
    d = Spectrum.from_csv((out / "spectrum_dirichlet.csv").read_text())
    assert np.allclose(d.lam, np.arange(1, 6) ** 2, atol=1e-9)
    dn = json.loads((out / "spectrum_dirichlet_neumann.json").read_text())
    assert dn["lambda"][0] == pytest.approx([0.25, 0.0])


def test_solve_constant_q_single_bc(tmp_path):
    cfg = {"potential": {"kind": "constant_q", "c": 1.0}, "n_max": 10}
    code, out = _run(tmp_path, "solve", cfg, "--bc", "dirichlet", "--nmax", "3")
    assert code == 0
    assert sorted(os.listdir(out)) == ["spectrum_dirichlet.csv", "spectrum_dirichlet.json"]
    d = Spectrum.from_csv((out / "spectrum_dirichlet.csv").read_text())
    assert len(d) == 3 and d.lam[0] == pytest.approx(2.0, abs=1e-9)


def test_oracle_matches_solve(tmp_path):
    cfg = {"potential": {"kind": "fourier", "c0": 0.0, "cos": [0.5], "sin": [0.2]}, "n_max": 6}
    assert _run(tmp_path, "solve", cfg)[0] == 0
    a = Spectrum.from_csv((tmp_path / "out" / "spectrum_dirichlet.csv").read_text())
    cfg["out"] = str(tmp_path / "o2")
    path = tmp_path / "c2.json"
    path.write_text(json.dumps(cfg))
    assert main(["oracle", str(path)]) == 0
    b = Spectrum.from_csv((tmp_path / "o2" / "oracle_spectrum_dirichlet.csv").read_text())
    assert np.allclose(a.lam, b.lam, rtol=1e-8)


def test_ensemble_file_names(tmp_path):
    cfg = {"ensemble": {"theta": 1.0, "R": 1.0, "count": 5, "seed": 7}, "n_max": 3,
           "bc": ["dirichlet"]}
    code, out = _run(tmp_path, "solve", cfg)
    assert code == 0
    names = sorted(f for f in os.listdir(out) if f.endswith(".csv"))
    assert names == [f"member{i:03d}_seed{7 + i}_dirichlet.csv" for i in range(5)]


@pytest.mark.parametrize("theorem", ["main", "thm41"])
def test_verify_passes(tmp_path, theorem):
    pot = "zero" if theorem == "main" else {"kind": "constant_q", "c": 1.0}
    code, out = _run(tmp_path, "verify", {"potential": pot, "n_max": 40, "theorem": theorem})
    assert code == 0
    rep = json.loads((out / f"verify_{theorem}.json").read_text())
    assert all(rep["pass_flags"].values())
    if theorem == "main":
        assert rep["results"][0]["hat_norm"] < 1e-9


def test_ensemble_zero_count_one(tmp_path):
    cfg = {"ensemble": {"theta": 1.0, "R": 0.0, "count": 1, "seed": 0}, "n_max": 10}
    code, out = _run(tmp_path, "ensemble", cfg)
    assert code == 0
    assert json.loads((out / "ensemble.json").read_text())["result"]["max"] < 1e-9


def test_expand_and_sensitivity(tmp_path):
    cfg = {"potential": {"kind": "fourier", "c0": 0.0, "cos": [0.3]}, "m": 2,
           "k_list": [2, 4, 8], "bc": ["dirichlet"]}
    code, out = _run(tmp_path, "expand", cfg)
    assert code == 0
    assert (out / "ftable.csv").read_text().startswith("x,f_1_1")
    code, out = _run(tmp_path, "sensitivity", cfg)
    assert code == 0
    rep = json.loads((out / "sensitivity.json").read_text())
    assert max(r["fd_error"] for r in rep["derivatives"]) < 1e-5


@pytest.mark.parametrize("cfg", [
    {"potential": "zero", "n_max": 0},
    {"potential": {"kind": "nonsense"}},
    {"potential": "zero", "bc": ["periodic"]},
    {"potential": "zero", "theorem": "thm99"},
])
def test_config_errors_exit_1(tmp_path, cfg):
    assert _run(tmp_path, "verify", cfg)[0] == 1


def test_missing_file_exit_1(tmp_path):
    assert main(["solve", str(tmp_path / "nope.json")]) == 1


def test_solver_failure_exit_2_and_no_files(tmp_path):
    # a Galerkin cap too small to converge for a jump
    cfg = {"potential": {"kind": "delta_q", "c": 3.0}, "n_max": 3, "galerkin": True,
           "tolerances": {"oracle_tol": 1e-14}}
    code, out = _run(tmp_path, "solve", cfg)
    assert code == 2
    assert not out.exists() or not os.listdir(out)


def test_verify_false_flag_exit_4(tmp_path, monkeypatch):
    import slspec.cli as cli

    real = cli.thm51_check

    def failing(*a, **kw):
        rep = real(*a, **kw)
        rep["pass_flags"] = {"alpha_tail_nonincreasing": False}
        return rep

    monkeypatch.setattr(cli, "thm51_check", failing)
    cfg = {"potential": {"kind": "constant_q", "c": 1.0}, "n_max": 30, "theorem": "thm51"}
    code, out = _run(tmp_path, "verify", cfg)
    assert code == 4
    assert json.loads((out / "verify_thm51.json").read_text())["pass_flags"] == \
        {"all_members": False}


def test_rough_sigma_for_expansion_is_internal_failure(tmp_path):
    cfg = {"potential": {"kind": "delta_q", "c": 1.0}, "n_max": 30, "theorem": "thm51"}
    assert _run(tmp_path, "verify", cfg)[0] == 3


def test_deterministic_with_jobs(tmp_path):
    cfg = {"ensemble": {"theta": 0.3, "R": 1.0, "count": 3, "seed": 5}, "n_max": 20,
           "theorem": "thm21"}
    _, a = _run(tmp_path, "verify", cfg, "--jobs", "1", name="a.json")
    first = (a / "verify_thm21.json").read_bytes()
    _, b = _run(tmp_path, "verify", cfg, "--jobs", "2", name="b.json")
    assert (b / "verify_thm21.json").read_bytes() == first
