import glob
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from readlab.genomes.utils.degrader.strategy import (GRID_PARAMETERS,
                                                     DegradationKind)
from readlab.genomes.utils.report.density import ns_density
from readlab.genomes.utils.report.svg import (ChartKind, ChartSpec, Series,
                                              render_chart)
from readlab.genomes.utils.tables import (read_versioned_csv,
                                          save_dataframe_as_csv)
from readlab.utils.errors import DataError

logger = logging.getLogger(__name__)

CHART_DIR = "charts"


@dataclass(frozen=True, eq=False)
class Chart:
    """A chart and the exact values it plots."""

    name: str
    spec: ChartSpec
    values: pd.DataFrame


class RunTables:
    """Result tables of one run directory, as written by the experiment runner."""

    def __init__(self, run_dir: str):
        self.run_dir = run_dir
        info_path = self._path("run_info.csv")
        if not os.path.exists(info_path):
            raise DataError(f"{run_dir} holds no run_info.csv")
        info = read_versioned_csv(info_path, dtype={"value": str})
        self.info: Dict[str, str] = dict(zip(info["key"], info["value"]))
        self.kind = DegradationKind(self.info["degradation"])
        self.parameters = list(GRID_PARAMETERS[self.kind])
        self.correct = self._read("correct.csv", required=True)
        self.roster = [
            c for c in self.correct.columns if c not in ("point", "n_validation", *self.parameters)
        ]
        self.correct_train = self._read("correct_train.csv")
        self.predictions = self._read("predictions.csv")
        self.bs_distribution = self._read("bs_distribution.csv")
        self.congruence = self._read("congruence.csv")

    def _path(self, name: str) -> str:
        return os.path.join(self.run_dir, name)

    def _read(self, name: str, required: bool = False) -> Optional[pd.DataFrame]:
        path = self._path(name)
        if not os.path.exists(path):
            if required:
                raise DataError(f"{self.run_dir} holds no {name}")
            return None
        return read_versioned_csv(path, dtype={"point": str})

    @property
    def single_parameter(self) -> bool:
        return len(self.parameters) == 1

    @property
    def x_label(self) -> str:
        return self.parameters[0] if self.single_parameter else "grid point"

    def x_values(self, df: pd.DataFrame) -> List[float]:
        """Grid value for one-parameter runs, otherwise the point index."""
        if self.single_parameter:
            return [float(v) for v in df[self.parameters[0]]]
        return [float(int(p[1:])) for p in df["point"]]


def _series(x: List[float], df: pd.DataFrame, columns: List[str]) -> Tuple[Series, ...]:
    return tuple(
        Series(name=c, x=tuple(x), y=tuple(float(v) for v in df[c])) for c in columns
    )


def _values(tables: RunTables, x: List[float], df: pd.DataFrame, columns: List[str]) -> pd.DataFrame:
    out = pd.DataFrame({tables.x_label: x})
    for c in columns:
        out[c] = df[c].to_numpy()
    return out


def correct_chart(tables: RunTables, train: bool = False) -> Optional[Chart]:
    df = tables.correct_train if train else tables.correct
    if df is None:
        return None
    x = tables.x_values(df)
    name = "correct_train" if train else "correct"
    where = "training" if train else "validation"
    return Chart(
        name=name,
        spec=ChartSpec(
            kind=ChartKind.LINE,
            title=f"Correct predictions on the {where} set",
            x_label=tables.x_label,
            y_label="correct count",
            series=_series(x, df, tables.roster),
        ),
        values=_values(tables, x, df, tables.roster),
    )


def _per_classifier(
    tables: RunTables,
    df: Optional[pd.DataFrame],
    prefix: str,
    title: str,
    y_label: str,
    skip: Tuple[str, ...],
) -> List[Chart]:
    if df is None:
        return []
    charts = []
    for k in tables.roster:
        sub = df[df["classifier"] == k].reset_index(drop=True)
        if sub.empty:
            continue
        columns = [c for c in sub.columns if c not in skip]
        x = tables.x_values(sub)
        charts.append(
            Chart(
                name=f"{prefix}_{k}",
                spec=ChartSpec(
                    kind=ChartKind.MULTILINE,
                    title=f"{title} ({k})",
                    x_label=tables.x_label,
                    y_label=y_label,
                    series=_series(x, sub, columns),
                ),
                values=_values(tables, x, sub, columns),
            )
        )
    return charts


def prediction_charts(tables: RunTables) -> List[Chart]:
    skip = ("point", "classifier", *tables.parameters)
    return _per_classifier(tables, tables.predictions, "predictions", "Predictions per label", "reads", skip)


def bs_charts(tables: RunTables) -> List[Chart]:
    skip = ("point", "classifier", *tables.parameters)
    return _per_classifier(
        tables, tables.bs_distribution, "bs_distribution", "Boundary status distribution", "reads", skip
    )


def congruence_chart(tables: RunTables) -> Optional[Chart]:
    df = tables.congruence
    if df is None:
        return None
    columns = [c for c in df.columns if c not in ("point", *tables.parameters)]
    x = tables.x_values(df)
    return Chart(
        name="congruence",
        spec=ChartSpec(
            kind=ChartKind.MULTILINE,
            title="Congruence of classifier decisions",
            x_label=tables.x_label,
            y_label="identical decisions",
            series=_series(x, df, columns),
        ),
        values=_values(tables, x, df, columns),
    )


def selective_heatmap(tables: RunTables) -> Optional[Chart]:
    """Full-roster congruence over the (sel_probability, snp_probability) grid."""
    df = tables.congruence
    if df is None or tables.kind != DegradationKind.SELECTIVE_SNP:
        return None
    column = [c for c in df.columns if c not in ("point", *tables.parameters)][-1]
    sel = sorted({float(v) for v in df["sel_probability"]})
    snp = sorted({float(v) for v in df["snp_probability"]})
    matrix = np.full((len(snp), len(sel)), np.nan)
    for _, row in df.iterrows():
        matrix[snp.index(float(row["snp_probability"])), sel.index(float(row["sel_probability"]))] = float(row[column])
    return Chart(
        name="congruence_heatmap",
        spec=ChartSpec(
            kind=ChartKind.HEATMAP,
            title=f"Congruence {column}",
            x_label="sel_probability",
            y_label="snp_probability",
            matrix=tuple(tuple(float(v) for v in r) for r in matrix),
            row_values=tuple(snp),
            column_values=tuple(sel),
        ),
        values=pd.DataFrame(
            {
                "sel_probability": df["sel_probability"].astype(float),
                "snp_probability": df["snp_probability"].astype(float),
                column: df[column].astype(float),
            }
        ),
    )


def ns_charts(tables: RunTables) -> List[Chart]:
    """One density panel per boundary table found under points/."""
    charts = []
    for path in sorted(glob.glob(os.path.join(tables.run_dir, "points", "*", "boundary_*.csv"))):
        stem = os.path.basename(path)[len("boundary_") : -len(".csv")]
        classifier, pid = stem.rsplit("_", 1)
        ns = read_versioned_csv(path, dtype={"id": str})["ns"].to_numpy(dtype=np.float64)
        density = ns_density(ns)
        if density is None:
            series: Tuple[Series, ...] = ()
            values = pd.DataFrame({"ns": [], "density": []})
        else:
            x, y = density
            series = (Series(name=classifier, x=tuple(x.tolist()), y=tuple(y.tolist())),)
            values = pd.DataFrame({"ns": x, "density": y})
        charts.append(
            Chart(
                name=f"ns_{classifier}_{pid}",
                spec=ChartSpec(
                    kind=ChartKind.DENSITY,
                    title=f"Neighbor similarity ({classifier}, {pid})",
                    x_label="NS",
                    y_label="density",
                    series=series,
                ),
                values=values,
            )
        )
    return charts


def build_charts(run_dir: str) -> List[Chart]:
    tables = RunTables(run_dir)
    charts = [correct_chart(tables), correct_chart(tables, train=True)]
    charts += prediction_charts(tables)
    charts += bs_charts(tables)
    charts += [congruence_chart(tables), selective_heatmap(tables)]
    charts += ns_charts(tables)
    return [c for c in charts if c is not None]


def _write(chart: Chart, out_dir: str) -> str:
    path = os.path.join(out_dir, f"{chart.name}.svg")
    save_dataframe_as_csv(chart.values, os.path.join(out_dir, f"{chart.name}.csv"), kind="chart")
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(render_chart(chart.spec))
    return path


def write_charts(run_dir: str, out_dir: Optional[str] = None, workers: int = 1) -> List[str]:
    """Render every chart of a run; each SVG is written next to the CSV of its values."""
    out_dir = out_dir or os.path.join(run_dir, CHART_DIR)
    os.makedirs(out_dir, exist_ok=True)
    charts = build_charts(run_dir)
    logger.info("Rendering %d charts to %s", len(charts), out_dir)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            paths = list(executor.map(lambda c: _write(c, out_dir), charts))
    else:
        paths = [_write(c, out_dir) for c in charts]
    return paths


def entropy_chart(curve: List[Tuple[int, float]], p: float) -> Chart:
    iterations = [float(i) for i, _ in curve]
    entropy = [e for _, e in curve]
    return Chart(
        name="entropy_curve",
        spec=ChartSpec(
            kind=ChartKind.LINE,
            title=f"Triplet entropy under repeated SNP degradation (p={p:g})",
            x_label="iteration",
            y_label="entropy (bits)",
            series=(Series(name=f"p={p:g}", x=tuple(iterations), y=tuple(entropy)),),
        ),
        values=pd.DataFrame({"iteration": [i for i, _ in curve], "entropy": entropy}),
    )


def write_chart(chart: Chart, out_dir: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    return _write(chart, out_dir)
