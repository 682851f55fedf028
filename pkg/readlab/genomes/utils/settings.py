import hashlib
import itertools
import json
import os
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Tuple

import numpy as np

from readlab.genomes.utils.classifier import (ClassifierKind,
                                              resolve_hyperparams)
from readlab.genomes.utils.degrader.strategy import (GRID_PARAMETERS,
                                                     DegradationKind,
                                                     DegradationSpec)
from readlab.genomes.utils.simulator.markov import GenomeSpec, MarkovParams
from readlab.genomes.utils.simulator.pool import scaled_pool_counts
from readlab.genomes.utils.simulator.reads import ErrorModel
from readlab.genomes.utils.tables import read_versioned_csv
from readlab.utils.config import env_workers, parse_config, resolve_path
from readlab.utils.errors import ConfigError, DataError

# design-table headers accepted for the mixed mechanism
DESIGN_COLUMNS = {
    "Sel_Prob": "sel_probability",
    "SNP_Frac": "snp_fraction",
    "SNP_Prob": "snp_probability",
    "sel_probability": "sel_probability",
    "snp_fraction": "snp_fraction",
    "snp_probability": "snp_probability",
}

DEFAULT_ROSTER = (
    ClassifierKind.BAYES,
    ClassifierKind.NEURAL_NET,
    ClassifierKind.PARTITION_MODEL,
    ClassifierKind.RANDOM_FOREST,
)


def _require(d: dict, key: str, where: str = "") -> Any:
    if key not in d:
        raise ConfigError(f"{where}{key}", "missing")
    return d[key]


def _error_model(d: Optional[dict], where: str) -> ErrorModel:
    if d is None:
        return ErrorModel()
    try:
        return ErrorModel(**d)
    except (TypeError, ValueError) as e:
        raise ConfigError(where, str(e)) from None


def _markov(d: dict, where: str) -> MarkovParams:
    try:
        if "weights" in d:
            return MarkovParams(weights=np.asarray(d["weights"]), seed=int(d.get("seed", 0)))
        if "gc" in d:
            return MarkovParams.gc_biased(float(d["gc"]), seed=int(d.get("seed", 0)))
        return MarkovParams.random(
            seed=int(_require(d, "seed", f"{where}.")),
            concentration=float(d.get("concentration", 0.5)),
        )
    except ValueError as e:
        raise ConfigError(where, str(e)) from None


def _genome(d: dict, config: dict, where: str) -> GenomeSpec:
    label = str(_require(d, "label", f"{where}."))
    if "fasta" in d:
        return GenomeSpec(id=label, fasta=resolve_path(config, d["fasta"]))
    length = int(_require(d, "length", f"{where}."))
    return GenomeSpec(
        id=label, length=length, markov=_markov(_require(d, "markov", f"{where}."), f"{where}.markov")
    )


@dataclass(frozen=True)
class PoolSource:
    genome: GenomeSpec
    n_reads: int


@dataclass(frozen=True)
class DegradationPlan:
    kind: DegradationKind
    points: Tuple[Dict[str, float], ...]
    labels: Tuple[str, ...] = ()
    target_label: Optional[str] = None

    def specs(self) -> Tuple[DegradationSpec, ...]:
        return tuple(
            DegradationSpec(
                kind=self.kind, labels=self.labels, target_label=self.target_label, **point
            )
            for point in self.points
        )

    @property
    def parameter_names(self) -> Tuple[str, ...]:
        return GRID_PARAMETERS[self.kind]


def expand_grid(kind: DegradationKind, grid: dict, fixed: dict) -> Tuple[Dict[str, float], ...]:
    """Full factorial over grid values, first key outermost; fixed values fill the rest."""
    names = GRID_PARAMETERS[kind]
    for key in list(grid) + list(fixed):
        if key not in names:
            raise ConfigError(f"degradation.{key}", f"not a parameter of {kind.value}")
    missing = [n for n in names if n not in grid and n not in fixed]
    if missing:
        raise ConfigError(f"degradation.grid.{missing[0]}", "no values given")
    keys = list(grid)
    points = []
    for combo in itertools.product(*(grid[k] for k in keys)):
        point = {n: float(fixed[n]) for n in names if n in fixed}
        point.update({k: float(v) for k, v in zip(keys, combo)})
        for name, value in point.items():
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"degradation.grid.{name}", f"{value} outside [0, 1]")
        points.append({n: point[n] for n in names})
    if not points:
        raise ConfigError("degradation.grid", "empty grid")
    return tuple(points)


def load_design(path: str) -> Tuple[Dict[str, float], ...]:
    if not os.path.exists(path):
        raise ConfigError("degradation.design", f"file {path} does not exist")
    df = read_versioned_csv(path)
    columns = {c: DESIGN_COLUMNS[c] for c in df.columns if c in DESIGN_COLUMNS}
    names = GRID_PARAMETERS[DegradationKind.MIXED]
    if sorted(columns.values()) != sorted(names):
        raise ConfigError("degradation.design", f"needs columns for {', '.join(names)}")
    df = df.rename(columns=columns)
    return tuple({n: float(row[n]) for n in names} for _, row in df.iterrows())


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    output_dir: str
    master_seed: int
    genomes: Tuple[GenomeSpec, ...]
    degradation: DegradationPlan
    replicate: int = 0
    workers: int = 1
    compute_boundary: bool = True
    compute_ns: bool = False
    save_models: bool = False
    neighbor_chunk: int = 128
    read_length: int = 101
    training_coverage: float = 6.0
    training_error: ErrorModel = field(default_factory=ErrorModel)
    validation_reads: int = 2000
    validation_error: ErrorModel = field(default_factory=ErrorModel)
    initial_snp_probability: Optional[float] = None
    classifiers: Tuple[Tuple[ClassifierKind, dict], ...] = ()
    superfluous_pool: Tuple[PoolSource, ...] = ()
    config_hash: str = ""

    @property
    def roster(self) -> Tuple[ClassifierKind, ...]:
        return tuple(kind for kind, _ in self.classifiers)

    def hyperparams(self, kind: ClassifierKind) -> dict:
        return dict(self.classifiers)[kind]

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        genomes = tuple(_genome(g, d, f"genomes[{i}]") for i, g in enumerate(_require(d, "genomes")))
        labels = [g.id for g in genomes]
        if len(set(labels)) != len(labels):
            raise ConfigError("genomes", "duplicate labels")
        if len(genomes) < 2:
            raise ConfigError("genomes", "at least two source genomes are needed")

        raw_classifiers = d.get("classifiers") or {k.value: {} for k in DEFAULT_ROSTER}
        classifiers = []
        for name, overrides in raw_classifiers.items():
            try:
                kind = ClassifierKind(name)
            except ValueError:
                raise ConfigError(f"classifiers.{name}", "unknown classifier kind") from None
            classifiers.append((kind, resolve_hyperparams(kind, overrides)))
        if not classifiers:
            raise ConfigError("classifiers", "roster is empty")

        deg = _require(d, "degradation")
        try:
            kind = DegradationKind(_require(deg, "kind", "degradation."))
        except ValueError:
            raise ConfigError("degradation.kind", f"unknown kind {deg.get('kind')!r}") from None
        fixed = dict(deg.get("fixed", {}))
        plan_labels = tuple(fixed.pop("labels", ()))
        target_label = fixed.pop("target_label", None)
        if "design" in deg:
            if kind != DegradationKind.MIXED:
                raise ConfigError("degradation.design", "only mixed degradation reads a design table")
            points = load_design(resolve_path(d, deg["design"]))
        else:
            points = expand_grid(kind, _require(deg, "grid", "degradation."), fixed)
        plan = DegradationPlan(kind=kind, points=points, labels=plan_labels, target_label=target_label)
        try:
            plan.specs()
        except ValueError as e:
            raise ConfigError("degradation", str(e)) from None
        for label in plan_labels + ((target_label,) if target_label else ()):
            if label not in labels:
                raise ConfigError("degradation.fixed", f"label {label!r} is not a genome")

        pool = []
        scale = float(d.get("pool_scale", 0.01))
        defaults = scaled_pool_counts(scale)
        for i, p in enumerate(d.get("superfluous_pool", [])):
            genome = _genome(p, d, f"superfluous_pool[{i}]")
            if genome.id in labels:
                raise ConfigError(f"superfluous_pool[{i}].label", "clashes with a source genome")
            default = defaults.get(genome.id) or max(1, int(round(1000 * scale)))
            pool.append(PoolSource(genome=genome, n_reads=int(p.get("reads", default))))
        if kind == DegradationKind.SUPERFLUOUS and not pool:
            raise ConfigError("superfluous_pool", "superfluous degradation needs a pool")

        training = d.get("training", {})
        validation = d.get("validation", {})
        initial = d.get("initial_degradation") or {}
        initial_p = initial.get("snp_probability")
        if initial_p is not None and not 0.0 <= float(initial_p) <= 1.0:
            raise ConfigError("initial_degradation.snp_probability", "outside [0, 1]")

        read_length = int(d.get("read_length", 101))
        if read_length < 3:
            raise ConfigError("read_length", "must be at least 3")

        hashed = {k: v for k, v in d.items() if k not in ("config_dir", "output_dir", "workers")}
        return cls(
            name=str(d.get("name", "experiment")),
            output_dir=resolve_path(d, str(d.get("output_dir", "runs/experiment"))),
            master_seed=int(_require(d, "master_seed")),
            replicate=int(d.get("replicate", 0)),
            workers=env_workers(int(d.get("workers", 1))),
            compute_boundary=bool(d.get("compute_boundary", True)),
            compute_ns=bool(d.get("compute_ns", False)),
            save_models=bool(d.get("save_models", False)),
            neighbor_chunk=int(d.get("neighbor_chunk", 128)),
            read_length=read_length,
            genomes=genomes,
            training_coverage=float(training.get("coverage", 6.0)),
            training_error=_error_model(training.get("error_model"), "training.error_model"),
            validation_reads=int(validation.get("reads_per_label", 2000)),
            validation_error=_error_model(validation.get("error_model"), "validation.error_model"),
            initial_snp_probability=None if initial_p is None else float(initial_p),
            classifiers=tuple(classifiers),
            degradation=plan,
            superfluous_pool=tuple(pool),
            config_hash=hashlib.sha256(
                json.dumps(hashed, sort_keys=True).encode("utf-8")
            ).hexdigest(),
        )

    @classmethod
    def load(
        cls,
        path: str,
        seed: Optional[int] = None,
        workers: Optional[int] = None,
        out: Optional[str] = None,
        replicate: Optional[int] = None,
    ) -> "ExperimentConfig":
        """Parse a JSON config; command-line values given here take precedence."""
        if not os.path.exists(path):
            raise DataError(f"config file {path} does not exist")
        config = parse_config(path)
        if seed is not None:
            config["master_seed"] = seed
        if replicate is not None:
            config["replicate"] = replicate
        if out is not None:
            config["output_dir"] = os.path.abspath(out)
        cfg = cls.from_dict(config)
        if workers is not None:
            cfg = replace(cfg, workers=max(1, int(workers)))
        return cfg
