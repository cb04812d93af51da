import numpy as np
import pytest

from qdephase.errors import MissingSeries
from qdephase.export import export_csv, export_svg, read_csv
from qdephase.model import ModelParams
from qdephase.trajectory import CSV_COLUMNS, Trajectory, compute_trajectory, time_grid

HEADER = "t,re_gamma,im_gamma,abs_gamma,q_mean,c_coherent,w_mean,trace_distance,sigma,identity_residual\n"


def make(n=3, g=0.5, samples=3, t_max=1.0):
    return compute_trajectory(ModelParams.reference_regime(n, g), time_grid(t_max, samples))


def single_point():
    one = np.array([0.0])
    return Trajectory(
        params=ModelParams.reference_regime(3, 0.5), t=one, gamma=np.array([1.0 + 0j]),
        q_mean=one, c_coherent=one, w_mean=one, trace_distance=np.ones(1), sigma=one,
        backflow=np.zeros(1, bool), u_s_delta=one, u_total_delta=one, h_i_final=one,
    )


@pytest.fixture(scope="module")
def traj():
    return make(samples=201, t_max=10.0)


class TestCsv:
    def test_header_only(self, tmp_path):
        p = tmp_path / "e.csv"
        export_csv(None, p)
        assert p.read_bytes() == HEADER.encode()
        assert tuple(HEADER.strip().split(",")) == CSV_COLUMNS

    def test_three_samples_four_lines(self, tmp_path):
        p = tmp_path / "three.csv"
        export_csv(make(), p)
        text = p.read_text()
        assert text.endswith("\n") and "\r" not in text
        assert len(text.splitlines()) == 4

    def test_round_trip_bit_identical(self, tmp_path, traj):
        p = tmp_path / "rt.csv"
        export_csv(traj, p)
        back = read_csv(p)
        for name, col in traj.columns().items():
            assert np.array_equal(back[name], np.asarray(col, dtype=float)), name

    def test_scientific_notation(self, tmp_path):
        p = tmp_path / "fmt.csv"
        export_csv(make(), p)
        first = p.read_text().splitlines()[1].split(",")
        assert all("e" in x and "," not in x for x in first)
        assert first[0] == "0.0000000000000000e+00"

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        export_csv(make(samples=21), a)
        export_csv(make(samples=21), b)
        assert a.read_bytes() == b.read_bytes()


class TestSvg:
    @pytest.mark.parametrize("kind", ["fig4", "fig5"])
    def test_single_trajectory_figures(self, tmp_path, traj, kind):
        p = export_svg(traj, kind, tmp_path / f"{kind}.svg")
        text = open(p).read()
        assert text.lstrip().startswith("<?xml") and "</svg>" in text

    def test_fig4_has_two_axes(self, tmp_path, traj):
        text = open(export_svg(traj, "fig4", tmp_path / "f4.svg")).read()
        assert text.count('id="axes_') == 2

    @pytest.mark.parametrize("kind", ["fig2", "fig3"])
    def test_overlay(self, tmp_path, traj, kind):
        other = make(n=2, samples=201, t_max=10.0) if kind == "fig2" else make(g=0.3, samples=201, t_max=10.0)
        text = open(export_svg([traj, other], kind, tmp_path / f"{kind}.svg")).read()
        assert "</svg>" in text

    @pytest.mark.parametrize("kind", ["fig2", "fig3", "fig4", "fig5"])
    def test_single_point(self, tmp_path, kind):
        assert open(export_svg(single_point(), kind, tmp_path / "one.svg")).read().count("</svg>") == 1

    def test_deterministic(self, tmp_path, traj):
        a = export_svg(traj, "fig5", tmp_path / "a.svg")
        b = export_svg(traj, "fig5", tmp_path / "b.svg")
        assert open(a, "rb").read() == open(b, "rb").read()

    def test_missing_series(self, tmp_path):
        with pytest.raises(MissingSeries):
            export_svg([], "fig2", tmp_path / "x.svg")
        with pytest.raises(MissingSeries):
            export_svg(None, "fig4", tmp_path / "x.svg")

    def test_bad_kind(self, tmp_path, traj):
        with pytest.raises(ValueError):
            export_svg(traj, "fig9", tmp_path / "x.svg")
