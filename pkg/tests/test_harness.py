import pytest

from fkpplab import cli
from fkpplab.config import load_config
from fkpplab.errors import ConfigurationError
from fkpplab.reporting import ExperimentReport, config_hash
from fkpplab.studies import run_wave_study

SPEED_INI = """\
[geometry]
shape = interval
a = -0.5
b = 0.5

[initial]
variant = compact
amplitude = 0.9
width = 0.25

[solver]
t_end = 0.5

[study]
epsilons = 0.04, 0.02
"""

WAVE_INI = """\
[wave]
speeds = 2.0, 2.5
"""


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_config_rejects_unknown_keys(tmp_path):
    path = _write(tmp_path, "bad.ini", "[study]\nbogus = 1\n")
    with pytest.raises(ConfigurationError, match="unknown key"):
        load_config(path)


def test_config_rejects_unknown_section(tmp_path):
    path = _write(tmp_path, "bad.ini", "[nonsense]\nx = 1\n")
    with pytest.raises(ConfigurationError, match="unknown config section"):
        load_config(path)


def test_config_rejects_bad_value(tmp_path):
    path = _write(tmp_path, "bad.ini", "[solver]\nt_end = soon\n")
    with pytest.raises(ConfigurationError, match="bad value"):
        load_config(path)


def test_config_missing_file():
    with pytest.raises(ConfigurationError, match="not found"):
        load_config("/nonexistent/nowhere.ini")


def test_config_parses_lists_and_scalars(tmp_path):
    path = _write(tmp_path, "ok.ini", SPEED_INI)
    cfg = load_config(path)
    assert cfg["study"]["epsilons"] == (0.04, 0.02)
    assert cfg["solver"]["t_end"] == 0.5
    assert cfg["geometry"]["shape"] == "interval"


def test_report_csv_deterministic(tmp_path):
    rep = run_wave_study(speeds=(2.5,))
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    rep.metadata["config_hash"] = config_hash({"speeds": (2.5,)})
    rep.write_csv(p1)
    rep2 = run_wave_study(speeds=(2.5,))
    rep2.metadata["config_hash"] = config_hash({"speeds": (2.5,)})
    rep2.write_csv(p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_report_hash_distinguishes_configs():
    h1 = config_hash({"epsilons": (0.04, 0.02), "t_end": 1.0})
    h2 = config_hash({"epsilons": (0.04, 0.02), "t_end": 2.0})
    assert h1 != h2
    assert h1 == config_hash({"t_end": 1.0, "epsilons": (0.04, 0.02)})


def test_report_rows_sorted_by_decreasing_epsilon(tmp_path):
    path = _write(tmp_path, "speed.ini", SPEED_INI)
    rc = cli.main(["speed", "--config", path, "--out", str(tmp_path / "out")])
    assert rc == 0
    lines = (tmp_path / "out" / "report.csv").read_text().splitlines()
    data = [l for l in lines if l and not l.startswith("#") and l[0].isdigit()]
    eps = [float(l.split(",")[0]) for l in data]
    assert eps == sorted(eps, reverse=True)


def test_cli_wave_roundtrip(tmp_path):
    path = _write(tmp_path, "wave.ini", WAVE_INI)
    out = tmp_path / "wave_out"
    rc = cli.main(["wave", "--config", path, "--out", str(out), "--svg"])
    assert rc == 0
    assert (out / "report.csv").exists()
    assert (out / "wave_c2.csv").exists()
    assert (out / "wave_c2.svg").exists()
    svg = (out / "wave_c2.svg").read_text()
    assert svg.startswith("<svg") and "polyline" in svg


def test_cli_usage_errors(tmp_path):
    assert cli.main(["speed", "--config", "/no/such.ini",
                     "--out", str(tmp_path)]) == 1
    single = _write(tmp_path, "single.ini", "[study]\nepsilons = 0.04\n")
    assert cli.main(["speed", "--config", single, "--out", str(tmp_path)]) == 1
    bad = _write(tmp_path, "bad.ini", "[study]\nbogus = 1\n")
    assert cli.main(["speed", "--config", bad, "--out", str(tmp_path)]) == 1


def test_cli_check_failure_exit_code(tmp_path):
    # an impossible ordering tolerance forces a failing verdict (exit 2)
    ini = _write(tmp_path, "barriers.ini",
                 "[kinetics]\nepsilon = 0.02\n\n[study]\nordering_tol = -1.0\n")
    rc = cli.main(["barriers", "--config", ini, "--out", str(tmp_path / "o")])
    assert rc == 2


def test_cli_simulate_dumps_checkpoints(tmp_path):
    ini = _write(tmp_path, "sim.ini", """\
[kinetics]
epsilon = 0.1

[geometry]
shape = interval
a = -0.5
b = 0.5

[initial]
variant = compact
amplitude = 0.9
width = 0.25

[solver]
mode = line
t_end = 0.2
checkpoints = 0.1, 0.2
""")
    out = tmp_path / "sim_out"
    rc = cli.main(["simulate", "--config", ini, "--out", str(out)])
    assert rc == 0
    assert (out / "checkpoint_t0.1.csv").exists()
    assert (out / "checkpoint_t0.2.csv").exists()
    header = (out / "checkpoint_t0.2.csv").read_text().splitlines()[0]
    assert header.startswith("# t=")


def test_svg_emitter_log_axes(tmp_path):
    from fkpplab.svgplot import line_plot

    path = tmp_path / "p.svg"
    line_plot(path, [([0.01, 0.1, 1.0], [1e-4, 1e-2, 1.0], "series")],
              title="t", xlabel="x", ylabel="y", logx=True, logy=True)
    text = path.read_text()
    assert text.startswith("<svg") and text.rstrip().endswith("</svg>")


def test_report_summary_and_passed_flag():
    rep = ExperimentReport("demo", columns=("a",))
    rep.add_check("ok", True)
    assert rep.passed
    rep.add_check("broken", False, "detail")
    assert not rep.passed
    lines = list(rep.summary_lines())
    assert any("FAIL" in l and "broken" in l for l in lines)
