import glob
import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from readlab.genomes.utils.boundary import boundary_table
from readlab.genomes.utils.classifier import confusion_matrix, fit
from readlab.genomes.utils.degrader import DegradationContext
from readlab.genomes.utils.degrader.snp import (apply_substitution,
                                                degrade_snp,
                                                substitution_draws)
from readlab.genomes.utils.degrader.strategy import (DegradationKind,
                                                     DegradationSpec)
from readlab.genomes.utils.metrics import (congruence, congruence_columns,
                                           fit_ols, min_model_check)
from readlab.genomes.utils.sequence.fasta import (read_fasta_file,
                                                  write_reads_csv)
from readlab.genomes.utils.sequence.records import (DatasetRole, DnaSequence,
                                                    LabelSet, ReadDataset,
                                                    merge)
from readlab.genomes.utils.sequence.triplets import (triplet_distribution,
                                                     triplet_entropy)
from readlab.genomes.utils.settings import ExperimentConfig
from readlab.genomes.utils.simulator.markov import GenomeSpec, generate_genome
from readlab.genomes.utils.simulator.pool import (PoolMember,
                                                  build_superfluous_pool)
from readlab.genomes.utils.simulator.reads import (SimulationSpec,
                                                   simulate_read_count,
                                                   simulate_reads)
from readlab.genomes.utils.tables import save_dataframe_as_csv
from readlab.utils.errors import DataError, RankDeficiencyError
from readlab.utils.seeding import derive_seed

logger = logging.getLogger(__name__)

STATUS_OK = "ok"
STATUS_FAILED = "failed"


def load_genome(spec: GenomeSpec) -> DnaSequence:
    if spec.fasta is not None:
        if not os.path.exists(spec.fasta):
            raise DataError(f"genome file {spec.fasta} does not exist")
        records = read_fasta_file(spec.fasta)
        if not records:
            raise DataError(f"{spec.fasta} holds no sequence")
        if len(records) > 1:
            logger.warning("%s holds %d records, using the first", spec.fasta, len(records))
        return records[0][1]
    return generate_genome(spec.markov, spec.length)


def point_id(index: int) -> str:
    return f"p{index:03d}"


@dataclass
class PointResult:
    index: int
    params: Dict[str, float]
    seed: int
    status: str = STATUS_OK
    message: str = ""
    n_training: int = 0
    correct: Dict[str, int] = field(default_factory=dict)
    correct_train: Dict[str, int] = field(default_factory=dict)
    predictions: Dict[str, Dict[str, int]] = field(default_factory=dict)
    bs_distribution: Dict[str, List[int]] = field(default_factory=dict)
    congruence: Dict[str, int] = field(default_factory=dict)
    files: List[str] = field(default_factory=list)
    validation_fingerprint: str = ""
    config_hash: str = ""
    runtime: float = 0.0

    @property
    def point_id(self) -> str:
        return point_id(self.index)

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK

    def to_json_str(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json_str(cls, text: str) -> "PointResult":
        return cls(**json.loads(text))


@dataclass
class ExperimentResult:
    config_hash: str
    validation_fingerprint: str
    points: List[PointResult]
    files: Dict[str, str] = field(default_factory=dict)

    @property
    def failed(self) -> List[PointResult]:
        return [p for p in self.points if not p.ok]


class ExperimentRunner:
    """
    Degrade the training set at every grid point, refit the classifier roster,
    and score it on one validation set built once per run.

    Each grid point writes points/<id>/result.json when it finishes; a rerun skips
    points whose result is already ok, then the run-level tables are rebuilt from
    those files in grid order.
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.output_dir = config.output_dir
        self.training: Optional[ReadDataset] = None
        self.validation: Optional[ReadDataset] = None
        self.pool: Optional[ReadDataset] = None
        self.label_set: Optional[LabelSet] = None

    # ------------------------------------------------------------------ data
    def _seed(self, mechanism: str, params: Tuple[float, ...] = ()) -> int:
        return derive_seed(
            self.config.master_seed, mechanism, params, self.config.replicate
        )

    def prepare(self) -> None:
        cfg = self.config
        logger.info("Preparing %d source genomes...", len(cfg.genomes))
        training_parts, validation_parts = [], []
        for spec in cfg.genomes:
            genome = load_genome(spec)
            logger.info("Simulating reads for %s (%d bases)...", spec.id, len(genome))
            training_parts.append(
                simulate_reads(
                    genome,
                    spec.id,
                    SimulationSpec(
                        read_length=cfg.read_length,
                        coverage=cfg.training_coverage,
                        error_model=cfg.training_error,
                        seed=self._seed(f"simulate:training:{spec.id}"),
                    ),
                    DatasetRole.TRAINING,
                )
            )
            validation_parts.append(
                simulate_read_count(
                    genome,
                    spec.id,
                    cfg.validation_reads,
                    SimulationSpec(
                        read_length=cfg.read_length,
                        coverage=1.0,
                        error_model=cfg.validation_error,
                        seed=self._seed(f"simulate:validation:{spec.id}"),
                    ),
                    DatasetRole.VALIDATION,
                )
            )
        training = merge(training_parts, DatasetRole.TRAINING)
        if cfg.initial_snp_probability is not None:
            p = cfg.initial_snp_probability
            logger.info("Applying initial SNP degradation at %.2f", p)
            training = degrade_snp(training, p, self._seed("initial:snp", (p,)))
        self.training = training
        self.validation = merge(validation_parts, DatasetRole.VALIDATION)
        self.label_set = self.validation.label_set

        if cfg.degradation.kind == DegradationKind.SUPERFLUOUS:
            members = [
                PoolMember(label=s.genome.id, genome=load_genome(s.genome), n_reads=s.n_reads)
                for s in cfg.superfluous_pool
            ]
            seeds = [self._seed(f"simulate:pool:{m.label}") for m in members]
            self.pool = build_superfluous_pool(members, cfg.read_length, cfg.training_error, seeds)
            self.label_set = self.label_set.union(self.pool.label_set)
            logger.info("Superfluous pool holds %d reads", len(self.pool))

        logger.info(
            "Training set: %d reads, validation set: %d reads",
            len(self.training),
            len(self.validation),
        )

    # ---------------------------------------------------------------- points
    def _point_dir(self, index: int) -> str:
        return os.path.join(self.output_dir, "points", point_id(index))

    def _check_existing(self) -> None:
        """Refuse to resume into a directory written by a different config."""
        pattern = os.path.join(self.output_dir, "points", "*", "result.json")
        for path in sorted(glob.glob(pattern)):
            with open(path, "r", encoding="utf-8") as f:
                found = PointResult.from_json_str(f.read()).config_hash
            if found != self.config.config_hash:
                raise DataError(
                    f"{os.path.dirname(path)} holds results of config {found or 'unknown'}, "
                    f"this run is {self.config.config_hash}; use another output directory"
                )

    def _load_existing(self, index: int) -> Optional[PointResult]:
        path = os.path.join(self._point_dir(index), "result.json")
        if not os.path.exists(path):
            return None
        with open(path, "r", encoding="utf-8") as f:
            result = PointResult.from_json_str(f.read())
        return result if result.ok else None

    def fit_roster(self, training: ReadDataset, spec: DegradationSpec, workers: int = 1):
        """Fit every classifier; each seed depends only on its own kind and the point."""
        models = {}
        for kind in self.config.roster:
            seed = self._seed(f"fit:{kind.value}", spec.parameter_values())
            logger.debug("Fitting %s (seed %d)", kind.value, seed)
            models[kind] = fit(
                kind, training, self.config.hyperparams(kind), seed=seed, workers=workers
            )
        return models

    def run_point(self, index: int, spec: DegradationSpec, workers: int = 1) -> PointResult:
        cfg = self.config
        start = time.perf_counter()
        pid = point_id(index)
        out_dir = self._point_dir(index)
        seed = self._seed(spec.seed_label, spec.parameter_values())
        result = PointResult(
            index=index,
            params=dict(zip(spec.parameter_names, spec.parameter_values())),
            seed=seed,
            validation_fingerprint=self.validation.fingerprint(),
            config_hash=cfg.config_hash,
        )

        degraded = DegradationContext(self.pool).degrade(self.training, spec, seed)
        result.n_training = len(degraded)
        models = self.fit_roster(degraded, spec, workers=workers)

        vectors = []
        for kind, model in models.items():
            name = kind.value
            cm = confusion_matrix(model, self.validation, self.label_set)
            cm_train = confusion_matrix(model, degraded, self.label_set)
            result.correct[name] = cm.correct
            result.correct_train[name] = cm_train.correct
            result.predictions[name] = cm.column_totals()
            result.files.append(
                os.path.relpath(cm.save(os.path.join(out_dir, f"confusion_{name}_{pid}.csv")), self.output_dir)
            )
            result.files.append(
                os.path.relpath(
                    cm_train.save(os.path.join(out_dir, f"confusion_train_{name}_{pid}.csv")),
                    self.output_dir,
                )
            )
            vectors.append(model.decision_vector(self.validation))
            if cfg.save_models:
                model.save(os.path.join(out_dir, f"model_{name}.json"))

            if cfg.compute_boundary:
                table = boundary_table(
                    model, self.validation, chunk=cfg.neighbor_chunk, workers=workers
                )
                dist = table.bs_distribution()
                padded = np.zeros(len(self.label_set), dtype=np.int64)
                padded[: dist.size] = dist
                result.bs_distribution[name] = padded.tolist()
                if cfg.compute_ns:
                    path = table.save(os.path.join(out_dir, f"boundary_{name}_{pid}.csv"))
                    result.files.append(os.path.relpath(path, self.output_dir))

        if len(vectors) >= 2:
            abbreviations = [k.abbreviation for k in models]
            result.congruence = congruence(vectors, abbreviations).as_row()
        result.runtime = time.perf_counter() - start
        return result

    def _run_point_safely(self, index: int, spec: DegradationSpec, workers: int) -> PointResult:
        try:
            result = self.run_point(index, spec, workers=workers)
        except Exception as e:
            logger.error("Grid point %s failed: %s", point_id(index), e)
            result = PointResult(
                index=index,
                params=dict(zip(spec.parameter_names, spec.parameter_values())),
                seed=self._seed(spec.seed_label, spec.parameter_values()),
                status=STATUS_FAILED,
                message=str(e),
                config_hash=self.config.config_hash,
            )
        os.makedirs(self._point_dir(index), exist_ok=True)
        with open(os.path.join(self._point_dir(index), "result.json"), "w", encoding="utf-8") as f:
            f.write(result.to_json_str())
        return result

    def run(self) -> ExperimentResult:
        cfg = self.config
        self._check_existing()
        if self.training is None:
            self.prepare()
        os.makedirs(self.output_dir, exist_ok=True)
        for name, dataset in (("training", self.training), ("validation", self.validation)):
            path = os.path.join(self.output_dir, f"{name}_reads.csv")
            if not os.path.exists(path):
                write_reads_csv(dataset, path)
        specs = cfg.degradation.specs()

        results: Dict[int, PointResult] = {}
        pending = []
        for index, spec in enumerate(specs):
            existing = self._load_existing(index)
            if existing is not None:
                logger.info("Grid point %s already done, skipping.", point_id(index))
                results[index] = existing
            else:
                pending.append((index, spec))

        logger.info("Running %d of %d grid points with %d workers", len(pending), len(specs), cfg.workers)
        if cfg.workers > 1 and len(pending) > 1:
            inner = max(1, cfg.workers // len(pending))
            with ThreadPoolExecutor(max_workers=cfg.workers) as executor:
                futures = {
                    executor.submit(self._run_point_safely, index, spec, inner): index
                    for index, spec in pending
                }
                for future in as_completed(futures):
                    result = future.result()
                    results[result.index] = result
                    self._log_point(result, len(specs))
        else:
            for index, spec in pending:
                result = self._run_point_safely(index, spec, cfg.workers)
                results[index] = result
                self._log_point(result, len(specs))

        ordered = [results[i] for i in range(len(specs))]
        fingerprints = {p.validation_fingerprint for p in ordered if p.ok}
        if len(fingerprints) > 1:
            raise DataError("validation set changed between grid points")
        result = ExperimentResult(
            config_hash=cfg.config_hash,
            validation_fingerprint=self.validation.fingerprint(),
            points=ordered,
        )
        result.files = self.write_tables(result)
        return result

    @staticmethod
    def _log_point(result: PointResult, total: int) -> None:
        params = ", ".join(f"{k}={v:g}" for k, v in result.params.items())
        if result.ok:
            correct = ", ".join(f"{k} {v}" for k, v in result.correct.items())
            logger.info("[%d/%d] %s: %s", result.index + 1, total, params, correct)
        else:
            logger.info("[%d/%d] %s: failed", result.index + 1, total, params)

    # ---------------------------------------------------------------- tables
    def _save(self, df: pd.DataFrame, name: str, kind: str) -> str:
        path = save_dataframe_as_csv(df, os.path.join(self.output_dir, name), kind=kind)
        logger.info("Saved %d rows to %s", len(df), path)
        return path

    def write_tables(self, result: ExperimentResult) -> Dict[str, str]:
        cfg = self.config
        names = list(cfg.degradation.parameter_names)
        roster = [k.value for k in cfg.roster]
        labels = list(self.label_set)
        ok = [p for p in result.points if p.ok]

        def base(p: PointResult) -> dict:
            return {"point": p.point_id, **{n: p.params[n] for n in names}}

        files = {}
        files["run_info"] = self._save(
            pd.DataFrame(
                {
                    "key": [
                        "name",
                        "config_hash",
                        "master_seed",
                        "replicate",
                        "degradation",
                        "n_training",
                        "n_validation",
                        "training_fingerprint",
                        "validation_fingerprint",
                    ],
                    "value": [
                        cfg.name,
                        cfg.config_hash,
                        str(cfg.master_seed),
                        str(cfg.replicate),
                        cfg.degradation.kind.value,
                        str(len(self.training)),
                        str(len(self.validation)),
                        self.training.fingerprint(),
                        result.validation_fingerprint,
                    ],
                }
            ),
            "run_info.csv",
            "run_info",
        )
        files["manifest"] = self._save(
            pd.DataFrame(
                [
                    {
                        **base(p),
                        "seed": str(p.seed),
                        "status": p.status,
                        "message": p.message,
                        "files": ";".join(p.files),
                    }
                    for p in result.points
                ]
            ),
            "manifest.csv",
            "manifest",
        )
        files["timings"] = self._save(
            pd.DataFrame([{**base(p), "runtime_seconds": round(p.runtime, 3)} for p in result.points]),
            "timings.csv",
            "timings",
        )
        if not ok:
            logger.warning("No grid point succeeded; skipping result tables")
            return files

        files["correct"] = self._save(
            pd.DataFrame(
                [{**base(p), **{k: p.correct.get(k) for k in roster}, "n_validation": len(self.validation)} for p in ok]
            ),
            "correct.csv",
            "correct",
        )
        files["correct_train"] = self._save(
            pd.DataFrame(
                [{**base(p), **{k: p.correct_train.get(k) for k in roster}, "n_training": p.n_training} for p in ok]
            ),
            "correct_train.csv",
            "correct_train",
        )
        files["predictions"] = self._save(
            pd.DataFrame(
                [
                    {**base(p), "classifier": k, **{x: p.predictions[k].get(x, 0) for x in labels}}
                    for p in ok
                    for k in roster
                ]
            ),
            "predictions.csv",
            "predictions",
        )
        if cfg.compute_boundary:
            files["bs_distribution"] = self._save(
                pd.DataFrame(
                    [
                        {
                            **base(p),
                            "classifier": k,
                            **{f"bs_{i}": c for i, c in enumerate(p.bs_distribution[k])},
                        }
                        for p in ok
                        for k in roster
                    ]
                ),
                "bs_distribution.csv",
                "bs_distribution",
            )
        columns = congruence_columns([k.abbreviation for k in cfg.roster])
        if len(roster) >= 2:
            files["congruence"] = self._save(
                pd.DataFrame([{**base(p), **{c: p.congruence[c] for c in columns}} for p in ok]),
                "congruence.csv",
                "congruence",
            )

        dominance = breakdown_dominance(ok, roster, names)
        files["dominance"] = self._save(dominance, "dominance.csv", "dominance")
        if len(names) == 1:
            files["breakdown"] = self._save(
                breakdown_summary(ok, roster, names[0]), "breakdown.csv", "breakdown"
            )

        files.update(self._write_models_of_congruence(ok, names, columns))
        return files

    def _write_models_of_congruence(self, ok: List[PointResult], names: List[str], columns: List[str]):
        files = {}
        kind = self.config.degradation.kind
        if not columns or len(ok) < len(names) + 2:
            return files
        X = np.array([[p.params[n] for n in names] for p in ok])
        try:
            if kind == DegradationKind.MIXED:
                for column in columns:
                    y = np.array([p.congruence[column] for p in ok], dtype=np.float64)
                    model = fit_ols(X, y, names=names)
                    files[f"ols_{column}"] = self._save(model.to_frame(), f"ols_{column}.csv", "ols")
            elif kind == DegradationKind.SELECTIVE_SNP:
                column = columns[-1]
                y = np.array([p.congruence[column] for p in ok], dtype=np.float64)
                check = min_model_check(X[:, 0], X[:, 1], y)
                files["ols_min_model"] = self._save(check.fit.to_frame(), "ols_min_model.csv", "ols")
                files["min_model_points"] = self._save(
                    check.to_frame(X[:, 0], X[:, 1], y), "min_model_points.csv", "min_model"
                )
        except RankDeficiencyError as e:
            logger.warning("Skipping congruence regression: %s", e)
        return files


def breakdown_dominance(points: List[PointResult], roster: List[str], names: List[str]) -> pd.DataFrame:
    """Share of the most frequent prediction per grid point and classifier."""
    rows = []
    for p in points:
        for k in roster:
            tally = p.predictions[k]
            total = sum(tally.values())
            label = max(tally, key=lambda x: (tally[x], -list(tally).index(x)))
            rows.append(
                {
                    "point": p.point_id,
                    **{n: p.params[n] for n in names},
                    "classifier": k,
                    "dominant_label": label,
                    "dominant_share": tally[label] / total if total else 0.0,
                }
            )
    return pd.DataFrame(rows)


def breakdown_summary(points: List[PointResult], roster: List[str], parameter: str) -> pd.DataFrame:
    """Grid value after the largest drop in correct count between consecutive points."""
    rows = []
    for k in roster:
        correct = np.array([p.correct[k] for p in points], dtype=np.int64)
        values = [p.params[parameter] for p in points]
        if correct.size < 2:
            rows.append({"classifier": k, "breakdown_value": values[0], "largest_drop": 0})
            continue
        drops = correct[:-1] - correct[1:]
        i = int(np.argmax(drops))
        rows.append(
            {
                "classifier": k,
                "breakdown_value": values[i + 1],
                "largest_drop": int(drops[i]),
            }
        )
    return pd.DataFrame(rows)


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    return ExperimentRunner(cfg).run()


def entropy_curve(genome: DnaSequence, iterations: int, p: float, seed: int) -> List[Tuple[int, float]]:
    """
    Triplet entropy of the genome after 0, 1, ..., iterations rounds of SNP
    degradation at p. Round i draws from derive_seed(seed, "entropy", (p,), i).
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    codes = genome.codes()
    curve = [(0, triplet_entropy(triplet_distribution(genome)))]
    for i in range(1, iterations + 1):
        rng = np.random.default_rng(derive_seed(seed, "entropy", (p,), i))
        codes = apply_substitution(codes, substitution_draws(rng, codes.shape), p)
        curve.append((i, triplet_entropy(triplet_distribution(DnaSequence.from_codes(codes)))))
    return curve
