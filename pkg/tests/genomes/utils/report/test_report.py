import os

import numpy as np
import pandas as pd
import pytest

from readlab.genomes.utils.report import (ChartKind, ChartSpec, Series,
                                          build_charts, entropy_chart,
                                          ns_density, render_chart,
                                          write_chart, write_charts)
from readlab.genomes.utils.tables import (read_versioned_csv,
                                          save_dataframe_as_csv)
from readlab.utils.errors import DataError

CELL = 'stroke="#ffffff" stroke-width="1"'


def line_spec(*series, kind=ChartKind.LINE) -> ChartSpec:
    return ChartSpec(kind=kind, title="t", x_label="x", y_label="y", series=tuple(series))


def write_run(run_dir, kind="snp", congruence=None):
    """Hand-written result tables in the layout the runner produces."""
    save_dataframe_as_csv(
        pd.DataFrame({"key": ["name", "degradation"], "value": ["fake", kind]}),
        os.path.join(run_dir, "run_info.csv"),
        "run_info",
    )
    if kind == "snp":
        grid = pd.DataFrame({"point": ["p000", "p001", "p002"], "snp_probability": [0.0, 0.5, 0.9]})
    else:
        grid = pd.DataFrame(
            {
                "point": [f"p{i:03d}" for i in range(6)],
                "sel_probability": [0.1, 0.1, 0.1, 0.6, 0.6, 0.6],
                "snp_probability": [0.2, 0.5, 0.8, 0.2, 0.5, 0.8],
            }
        )
    n = len(grid)
    correct = grid.assign(bayes=np.arange(n) + 50, random_forest=np.arange(n) + 40, n_validation=90)
    save_dataframe_as_csv(correct, os.path.join(run_dir, "correct.csv"), "correct")
    predictions = pd.concat(
        [grid.assign(classifier=k, Adeno=30, COVID=30 + i, SARS=30 - i) for i, k in enumerate(["bayes", "random_forest"])]
    )
    save_dataframe_as_csv(predictions, os.path.join(run_dir, "predictions.csv"), "predictions")
    values = congruence if congruence is not None else np.arange(n) + 70
    save_dataframe_as_csv(grid.assign(BA_RF=values), os.path.join(run_dir, "congruence.csv"), "congruence")


class TestSvg:
    def test_single_polyline(self):
        svg = render_chart(line_spec(Series("a", (0.0, 1.0), (2.0, 3.0))))
        assert svg.count("<polyline") == 1
        points = svg.split('points="')[1].split('"')[0].split()
        assert len(points) == 2
        assert svg.startswith("<svg") and svg.endswith("</svg>\n")

    def test_series_sorted_by_x(self):
        svg = render_chart(line_spec(Series("a", (1.0, 0.0, 0.5), (1.0, 0.0, 0.5))))
        xs = [float(p.split(",")[0]) for p in svg.split('points="')[1].split('"')[0].split()]
        assert xs == sorted(xs)

    def test_heatmap_cells(self):
        spec = ChartSpec(
            kind=ChartKind.HEATMAP,
            title="h",
            x_label="sel",
            y_label="snp",
            matrix=((1.0, 2.0, 3.0, 4.0), (5.0, 6.0, 7.0, 8.0), (9.0, 10.0, 11.0, float("nan"))),
            row_values=(0.1, 0.2, 0.3),
            column_values=(0.1, 0.2, 0.3, 0.4),
        )
        assert render_chart(spec).count(CELL) == 12

    def test_density_has_no_markers(self):
        x, y = ns_density(np.random.default_rng(0).beta(5, 1, size=6000))
        svg = render_chart(line_spec(Series("BA", tuple(x), tuple(y)), kind=ChartKind.DENSITY))
        assert svg.count("<polyline") == 1
        assert "<circle" not in svg

    def test_blank_density_panel(self):
        svg = render_chart(line_spec(kind=ChartKind.DENSITY))
        assert "<polyline" not in svg

    def test_title_is_escaped(self):
        spec = ChartSpec(kind=ChartKind.LINE, title="a<b & c", x_label="x", y_label="y",
                         series=(Series("s", (0.0,), (1.0,)),))
        assert "a&lt;b &amp; c" in render_chart(spec)

    @pytest.mark.parametrize(
        "spec",
        [
            line_spec(),
            line_spec(Series("a", (0.0, 1.0), (1.0,))),
            line_spec(Series("a", (), ())),
            ChartSpec(kind=ChartKind.HEATMAP, title="h", x_label="x", y_label="y", matrix=((1.0, 2.0), (3.0,)),
                      row_values=(0.0, 1.0), column_values=(0.0, 1.0)),
            ChartSpec(kind=ChartKind.HEATMAP, title="h", x_label="x", y_label="y", matrix=((1.0, 2.0),),
                      row_values=(0.0, 1.0), column_values=(0.0, 1.0)),
            ChartSpec(kind=ChartKind.HEATMAP, title="h", x_label="x", y_label="y"),
        ],
    )
    def test_invalid_specs(self, spec):
        with pytest.raises(DataError):
            render_chart(spec)

    def test_identical_specs_identical_bytes(self):
        spec = line_spec(Series("a", (0.0, 0.5, 1.0), (3.0, 1.0, 2.0)), Series("b", (0.0, 1.0), (0.0, 5.0)))
        assert render_chart(spec) == render_chart(spec)


class TestDensity:
    def test_grid(self):
        x, y = ns_density(np.random.default_rng(1).uniform(size=500))
        assert x.size == 201 and x[0] == 0.0 and x[-1] == 1.0
        assert (y >= 0).all()

    def test_nothing_to_estimate(self):
        assert ns_density(np.ones(100)) is None
        assert ns_density([0.5]) is None
        assert ns_density([0.3, 0.3, 0.3]) is None

    def test_matches_histogram_of_large_sample(self):
        values = np.random.default_rng(2).beta(2, 5, size=10_000)
        x, y = ns_density(values)
        hist, edges = np.histogram(values, bins=10, range=(0.0, 1.0), density=True)
        for lo, hi, expected in zip(edges[1:8], edges[2:9], hist[1:8]):
            inside = (x >= lo) & (x <= hi)
            assert y[inside].mean() == pytest.approx(expected, abs=0.1)
        assert np.trapezoid(y, x) == pytest.approx(1.0, abs=0.03)


class TestCharts:
    def test_one_parameter_run(self, tmp_path):
        write_run(str(tmp_path))
        charts = {c.name: c for c in build_charts(str(tmp_path))}
        assert set(charts) == {"correct", "predictions_bayes", "predictions_random_forest", "congruence"}
        correct = charts["correct"]
        assert correct.spec.x_label == "snp_probability"
        assert [s.name for s in correct.spec.series] == ["bayes", "random_forest"]
        assert correct.values["bayes"].tolist() == [50, 51, 52]

    def test_selective_heatmap(self, tmp_path):
        write_run(str(tmp_path), kind="selective_snp", congruence=[1, 2, 3, 4, 5, 6])
        charts = {c.name: c for c in build_charts(str(tmp_path))}
        heat = charts["congruence_heatmap"].spec
        assert heat.row_values == (0.2, 0.5, 0.8)
        assert heat.column_values == (0.1, 0.6)
        assert heat.matrix == ((1.0, 4.0), (2.0, 5.0), (3.0, 6.0))
        assert charts["correct"].spec.x_label == "grid point"

    def test_ns_panels(self, tmp_path):
        write_run(str(tmp_path))
        rng = np.random.default_rng(2)
        for pid in ("p000", "p001"):
            ns = np.ones(50) if pid == "p000" else rng.uniform(size=50)
            save_dataframe_as_csv(
                pd.DataFrame({"id": [f"r{i}" for i in range(50)], "ns": ns}),
                str(tmp_path / "points" / pid / f"boundary_random_forest_{pid}.csv"),
                "boundary",
            )
        charts = {c.name: c for c in build_charts(str(tmp_path))}
        assert charts["ns_random_forest_p000"].spec.series == ()
        assert len(charts["ns_random_forest_p001"].values) == 201

    def test_rerender_is_byte_identical(self, tmp_path):
        run = tmp_path / "run"
        write_run(str(run))
        a = write_charts(str(run), str(tmp_path / "a"))
        b = write_charts(str(run), str(tmp_path / "b"), workers=3)
        assert [os.path.basename(p) for p in a] == [os.path.basename(p) for p in b]
        for pa, pb in zip(a, b):
            with open(pa, "rb") as fa, open(pb, "rb") as fb:
                assert fa.read() == fb.read()

    def test_values_written_next_to_svg(self, tmp_path):
        write_run(str(tmp_path))
        paths = write_charts(str(tmp_path))
        assert os.path.dirname(paths[0]) == str(tmp_path / "charts")
        values = read_versioned_csv(str(tmp_path / "charts" / "congruence.csv"))
        assert values["BA_RF"].tolist() == [70, 71, 72]

    def test_missing_tables(self, tmp_path):
        with pytest.raises(DataError):
            build_charts(str(tmp_path))

    def test_entropy_chart(self, tmp_path):
        chart = entropy_chart([(0, 5.2), (1, 5.6), (2, 5.9)], 0.5)
        path = write_chart(chart, str(tmp_path))
        assert path.endswith("entropy_curve.svg")
        assert chart.values["entropy"].tolist() == [5.2, 5.6, 5.9]
