import pytest

from miso_pareto.config import SolverConfig, load_solver_config
from miso_pareto.errors import ConfigError
from miso_pareto.services.scalar_search import AscentSettings


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("MISO_PARETO_CONFIG", "MISO_PARETO_M", "MISO_PARETO_EPSILON",
                 "MISO_PARETO_THREADS", "MISO_PARETO_OUTPUT_DIR", "MISO_PARETO_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)


def test_defaults():
    cfg = load_solver_config()
    assert cfg.grid_points == 500
    assert cfg.epsilon == 5e-5
    assert cfg.benchmark_sizes == (125, 250, 500, 1000)
    assert cfg.threads >= 1


def test_yaml_file(tmp_path):
    path = tmp_path / "solver.yaml"
    path.write_text("solver:\n  grid_points: 200\n  epsilon: 1.0e-6\n  benchmark_sizes: [50, 100]\n")
    cfg = load_solver_config(str(path))
    assert (cfg.grid_points, cfg.epsilon, cfg.benchmark_sizes) == (200, 1e-6, (50, 100))


def test_config_path_from_environment(tmp_path, monkeypatch):
    path = tmp_path / "flat.yaml"
    path.write_text("output_dir: out\n")
    monkeypatch.setenv("MISO_PARETO_CONFIG", str(path))
    assert load_solver_config().output_dir == "out"


def test_environment_wins_over_file(tmp_path, monkeypatch):
    path = tmp_path / "solver.yaml"
    path.write_text("threads: 2\n")
    monkeypatch.setenv("MISO_PARETO_THREADS", "3")
    monkeypatch.setenv("MISO_PARETO_EPSILON", "1e-8")
    cfg = load_solver_config(str(path))
    assert cfg.threads == 3
    assert cfg.epsilon == 1e-8


@pytest.mark.parametrize("text", ["unknown_key: 1\n", "- a\n- b\n", "grid_points: [1\n"])
def test_invalid_files(tmp_path, text):
    path = tmp_path / "bad.yaml"
    path.write_text(text)
    with pytest.raises(ConfigError):
        load_solver_config(str(path))


def test_invalid_environment(monkeypatch):
    monkeypatch.setenv("MISO_PARETO_M", "many")
    with pytest.raises(ConfigError):
        load_solver_config()
    monkeypatch.setenv("MISO_PARETO_M", "1")
    with pytest.raises(ConfigError):
        load_solver_config()


@pytest.mark.parametrize("kwargs", [
    {"epsilon": 0.0},
    {"backtrack_shrink": 1.0},
    {"sufficient_increase": 0.0},
    {"threads": 0},
    {"sigma_sq_default": -1.0},
    {"root_tolerance": -1e-9},
])
def test_invalid_values(kwargs):
    with pytest.raises(ConfigError):
        SolverConfig(**kwargs)


def test_ascent_settings_follow_the_config():
    cfg = SolverConfig(epsilon=1e-7, backtrack_shrink=0.25)
    settings = AscentSettings.from_config(cfg)
    assert (settings.epsilon, settings.backtrack_shrink) == (1e-7, 0.25)
    assert AscentSettings.from_config(cfg, 1e-3).epsilon == 1e-3
