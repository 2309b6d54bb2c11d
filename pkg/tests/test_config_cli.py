import json
import math
from pathlib import Path

import pytest
import yaml

from rkhsreg.cli import main
from rkhsreg.config import ConfigError, parse_config, validate_config
from rkhsreg.runner import dumps_report, run

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

MINIMAL_SOLVE = """
mode: solve
kernel: {family: linear, input_dim: 2}
functionals:
  - {type: point_eval, point: [1.0, 0.0]}
  - {type: point_eval, point: [0.0, 1.0]}
loss: {type: squared, targets: [2.0, 0.0]}
regularizer: {kind: radial, profile: square}
"""


def errors_of(text):
    with pytest.raises(ConfigError) as info:
        validate_config(text)
    return dict(info.value.errors)


def test_empty_file():
    assert errors_of("") == {"mode": "mode missing"}


def test_negative_width_reported_at_key_path():
    errs = errors_of(MINIMAL_SOLVE.replace("{family: linear, input_dim: 2}",
                                           "{family: gaussian, input_dim: 2, width: -1.0}"))
    assert list(errs) == ["kernel.width"]


def test_minimal_solve_echoes_defaults():
    cfg = validate_config(MINIMAL_SOLVE)
    d = cfg.to_dict()
    assert d["rng_seed"] == 0 and d["gamma"] == 1.0 and d["trials"] == 10_000
    assert d["tolerances"] == {"check": 1e-9, "radius": 1e-3}


def test_all_errors_collected():
    text = """
mode: probe
color: blue
kernel: {family: gaussian, input_dim: 1, width: 0, sigma: 2}
gamma: -1
probe: {name: wobble}
"""
    errs = errors_of(text)
    assert {"color", "kernel.width", "kernel.sigma", "gamma", "probe.name"} <= set(errs)


def test_unknown_nested_keys_rejected():
    text = MINIMAL_SOLVE + "output: {json: a.json, pdf: b.pdf}\n"
    assert "output.pdf" in errors_of(text)
    text = MINIMAL_SOLVE.replace("{type: point_eval, point: [1.0, 0.0]}",
                                 "{type: point_eval, point: [1.0, 0.0], scale: 2}")
    assert "functionals[0].scale" in errors_of(text)


def test_bad_functional_and_regularizer_messages():
    text = MINIMAL_SOLVE.replace("point: [0.0, 1.0]", "point: [0.0, 1.0, 2.0]")
    text = text.replace("profile: square", "profile: cube")
    errs = errors_of(text)
    assert "regularizer" in errs
    text = MINIMAL_SOLVE + "rng_seed: -3\n"
    assert "rng_seed" in errors_of(text)


def test_mode_requirements():
    assert {"kernel", "functionals", "loss", "regularizer"} <= set(errors_of("mode: solve"))
    assert "regularizer" in errors_of("mode: verify")
    assert "dimension" in errors_of("mode: verify\nregularizer: {kind: radial, profile: square}")


def test_gamma_inf_round_trip():
    cfg = validate_config(MINIMAL_SOLVE + "gamma: inf\n")
    assert cfg.gamma == math.inf
    assert "gamma: inf" in cfg.dumps()
    assert validate_config(cfg.dumps()) == cfg


@pytest.mark.parametrize("path", sorted(CONFIGS.glob("*.yaml")), ids=lambda p: p.stem)
def test_round_trip_of_shipped_configs(path):
    cfg = validate_config(path.read_text())
    assert validate_config(cfg.dumps()) == cfg
    assert parse_config(yaml.safe_load(cfg.dumps())).to_dict() == cfg.to_dict()


def test_gram_mode_three_points():
    cfg = validate_config((CONFIGS / "gram_points.yaml").read_text())
    rep = run(cfg)
    G = rep.report["results"]["gram"]
    assert len(G) == 3 and all(G[i][j] == G[j][i] for i in range(3) for j in range(3))
    assert rep.exit_code == 0


def test_solve_mode_desk_instance():
    rep = run(validate_config(MINIMAL_SOLVE))
    assert rep.report["results"]["solver"]["coefficients"] == [1.0, 0.0]
    assert rep.report["rng_seed"] == 0
    assert rep.exit_code == 0


def test_verify_square_all_pass():
    rep = run(validate_config((CONFIGS / "verify_square.yaml").read_text()))
    assert rep.exit_code == 0
    names = {c["name"] for c in rep.report["checks"]}
    assert {"characterization_agree", "chain_monotone", "span_projection_not_worse",
            "necessity_liminf"} <= names
    assert all(c["passed"] for c in rep.report["checks"])


def test_verify_anisotropic_exit_zero_with_observations():
    rep = run(validate_config((CONFIGS / "verify_anisotropic.yaml").read_text()))
    assert rep.exit_code == 0
    assert rep.report["results"]["predictions_checked"] is False
    assert rep.report["results"]["observations"]["chain_monotone"] is False


def test_report_is_deterministic():
    cfg = validate_config((CONFIGS / "probe_necessity.yaml").read_text())
    a, b = run(cfg), run(cfg)
    assert dumps_report(a.numbers()) == dumps_report(b.numbers())
    assert a.report["results"]["necessity"]["omega_x_plus_y"] == 3.25


def test_infeasible_solver_maps_to_exit_3():
    text = """
mode: solve
kernel: {family: gaussian, input_dim: 1}
functionals:
  - {type: point_eval, point: [0.5]}
  - {type: point_eval, point: [0.5]}
loss: {type: kpca}
regularizer: {kind: radial, profile: square}
"""
    rep = run(validate_config(text))
    assert rep.exit_code == 3
    assert rep.report["status"] == "numerical_failure"
    assert rep.report["error"]["type"] == "InfeasibleError"


def test_inf_encoded_as_string():
    text = "mode: probe\nregularizer: {kind: radial, profile: indicator_ball, radius: 1.0}\n" \
           "probe: {name: necessity, x: [0.8, 0.0], y: [0.0, 0.8]}\ngamma_schedule: [1.0, 2.0]\n"
    rep = run(validate_config(text))
    assert rep.report["results"]["necessity"]["omega_x_plus_y"] == "inf"
    json.loads(dumps_report(rep.report))


# -- command line -------------------------------------------------------------

def test_cli_exit_codes(tmp_path, capsys):
    out, csv = tmp_path / "r.json", tmp_path / "r.csv"
    assert main(["solve", "--config", str(CONFIGS / "solve_rls.yaml"), "--out", str(out),
                 "--csv", str(csv)]) == 0
    report = json.loads(out.read_text())
    assert report["results"]["solver"]["coefficients"] == [1.0, 0.0]
    assert csv.read_text().splitlines()[0] == "i,c,Gc"

    bad = tmp_path / "bad.yaml"
    bad.write_text("mode: solve\nkernel: {family: gaussian, input_dim: 1, width: -2}\n")
    assert main(["solve", "--config", str(bad)]) == 2
    assert "kernel.width" in capsys.readouterr().err

    assert main(["verify", "--config", str(CONFIGS / "solve_rls.yaml")]) == 2
    assert main(["validate", "--config", str(CONFIGS / "solve_rls.yaml")]) == 0


def test_check_failure_maps_to_exit_1(monkeypatch):
    from rkhsreg import runner

    def failing(cfg, checks):
        checks.add("always_fails", False, 1.0, 0.0)
        return {}, []

    monkeypatch.setitem(runner.MODES, "gram", failing)
    rep = run(validate_config((CONFIGS / "gram_points.yaml").read_text()))
    assert rep.report["status"] == "check_failure" and rep.exit_code == 1


def test_large_scale_gram_is_psd():
    text = """
mode: gram
kernel: {family: polynomial, input_dim: 1, degree: 6, offset: 10.0}
functionals:
  - {type: point_eval, point: [3.0]}
  - {type: point_eval, point: [3.1]}
  - {type: point_eval, point: [2.9]}
  - {type: point_eval, point: [3.05]}
"""
    assert run(validate_config(text)).exit_code == 0


def test_cli_seed_override(tmp_path):
    out = tmp_path / "o.json"
    main(["probe", "--config", str(CONFIGS / "probe_orthogonal.yaml"), "--seed", "17",
          "--out", str(out)])
    assert json.loads(out.read_text())["rng_seed"] == 17
