import json
import os

import pandas as pd
import pytest
from numpy.testing import assert_allclose

from miso_pareto.cli import (
    EXIT_INVALID,
    EXIT_IO,
    EXIT_OK,
    RunSpec,
    main,
    parse_args,
)
from miso_pareto.errors import DomainError
from miso_pareto.services.pareto import CSV_COLUMNS


def _read(path):
    with open(path, "rb") as f:
        return f.read()


def test_two_point_closed_form_run(tmp_path):
    out = tmp_path / "fig2"
    assert main(["--preset", "fig2", "--scenario", "nn-closed", "--M", "2", "--out", str(out)]) == EXIT_OK
    frame = pd.read_csv(out / "boundary_nn_closed.csv")
    assert len(frame) == 2
    assert list(frame.columns[:len(CSV_COLUMNS)]) == CSV_COLUMNS
    assert (frame["scenario"] == "nn").all()
    for name in ("region.gp", "region.html", "meta.json"):
        assert (out / name).exists()
    assert not (out / "channels.json").exists()

    meta = json.loads((out / "meta.json").read_text())
    assert meta["constants"]["kappa1"] == 0.3
    assert meta["constants"]["g12"] == 2.0
    assert meta["assumptions"]["sigma_sq_default"] == 1.0
    assert meta["points"] == {"nn-closed": 2}
    assert "numpy" in meta["versions"]
    assert '"boundary_nn_closed.csv" skip 1 using 2:3' in (out / "region.gp").read_text()


def test_default_scenarios_write_every_boundary(tmp_path):
    assert main(["--preset", "fig3", "--M", "20", "--out", str(tmp_path)]) == EXIT_OK
    for stem in ("nn_numerical", "dn", "nd", "dd", "union"):
        assert (tmp_path / f"boundary_{stem}.csv").exists()


@pytest.mark.parametrize("argv", [
    ["--constants", "1,2,2,1,0.3"],
    ["--constants", "1,2,2,1,1.3,0.3"],
    ["--constants", "1,2,x,1,0.3,0.3"],
    ["--preset", "fig2", "--scenario", "nx"],
    ["--preset", "fig2", "--M", "1"],
    ["--rayleigh", "4"],
])
def test_invalid_input_exits_with_2(tmp_path, argv):
    assert main(argv + ["--out", str(tmp_path / "out")]) == EXIT_INVALID


def test_missing_channel_source_is_a_usage_error():
    with pytest.raises(SystemExit) as e:
        main(["--M", "10"])
    assert e.value.code == EXIT_INVALID


def test_unwritable_output_exits_with_4(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["--preset", "fig2", "--scenario", "dn", "--M", "5", "--out", str(blocker)]) == EXIT_IO


def test_missing_channel_file_exits_with_4(tmp_path):
    argv = ["--channels", str(tmp_path / "absent.json"), "--out", str(tmp_path / "out")]
    assert main(argv) == EXIT_IO


def test_sequential_runs_are_byte_identical(tmp_path):
    argv = ["--preset", "fig4", "--scenario", "nn,dd,union", "--M", "40"]
    assert main(argv + ["--out", str(tmp_path / "a")]) == EXIT_OK
    assert main(argv + ["--out", str(tmp_path / "b")]) == EXIT_OK
    for stem in ("nn_numerical", "dd", "union"):
        name = f"boundary_{stem}.csv"
        assert _read(tmp_path / "a" / name) == _read(tmp_path / "b" / name)


def test_parallel_run_agrees_with_sequential(tmp_path):
    argv = ["--preset", "fig4", "--scenario", "nn,dd", "--M", "40", "--epsilon", "1e-10"]
    assert main(argv + ["--out", str(tmp_path / "seq")]) == EXIT_OK
    assert main(argv + ["--parallel", "--out", str(tmp_path / "par")]) == EXIT_OK
    for stem in ("nn_numerical", "dd"):
        seq = pd.read_csv(tmp_path / "seq" / f"boundary_{stem}.csv")
        par = pd.read_csv(tmp_path / "par" / f"boundary_{stem}.csv")
        assert_allclose(par["r1_bpcu"], seq["r1_bpcu"], atol=1e-12)
        assert_allclose(par["r2_bpcu"], seq["r2_bpcu"], atol=1e-6)


def test_rayleigh_run_keeps_the_channels(tmp_path):
    first, second = tmp_path / "first", tmp_path / "second"
    assert main(["--rayleigh", "3,5", "--scenario", "dn", "--M", "15", "--out", str(first)]) == EXIT_OK
    meta = json.loads((first / "meta.json").read_text())
    assert meta["channel"]["prng"] == "numpy.random.PCG64"

    channels = str(first / "channels.json")
    assert main(["--channels", channels, "--scenario", "dn", "--M", "15", "--out", str(second)]) == EXIT_OK
    assert _read(first / "boundary_dn.csv") == _read(second / "boundary_dn.csv")


def test_constants_file_source(tmp_path):
    path = tmp_path / "constants.json"
    path.write_text(json.dumps({"g11": 1, "g12": 2, "g21": 2, "g22": 1, "kappa1": 0.85, "kappa2": 0.3}))
    out = tmp_path / "out"
    assert main(["--constants-file", str(path), "--scenario", "nd", "--M", "10", "--out", str(out)]) == EXIT_OK
    assert os.path.exists(out / "boundary_nd.csv")


def test_parse_args_builds_a_run_spec():
    spec, level = parse_args(["--preset", "fig4", "--scenario", "nn_closed,oracle:dd", "--M", "30",
                              "--log-level", "DEBUG"])
    assert (spec.source, spec.source_value) == ("preset", "fig4")
    assert spec.scenarios == ("nn-closed", "oracle:dd")
    assert (spec.M, level) == (30, "DEBUG")


def test_run_spec_resolves_inline_constants():
    spec = RunSpec("constants", "1,2,2,1,0.3,0.3")
    constants, ch, info = spec.resolve_channel()
    assert ch is None
    assert constants.sigma1_sq == 1.0
    assert info["sigma_sq_assumed"] == 1.0
    with pytest.raises(DomainError):
        RunSpec("constants", "1,2,2,1,0.3,0.3", scenarios=())
