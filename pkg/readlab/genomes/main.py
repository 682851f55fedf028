import json
import logging
import os
import sys
from typing import List, Optional

import click

from readlab.genomes import scripts
from readlab.genomes.utils.classifier import ClassifierKind
from readlab.genomes.utils.degrader.strategy import (GRID_PARAMETERS,
                                                     DegradationKind)
from readlab.genomes.utils.simulator.markov import GenomeSpec, MarkovParams
from readlab.utils.errors import ReadlabError

LOG_FORMAT = "[%(name)s] %(message)s"
DEFAULT_CONFIG = os.path.join(os.path.dirname(os.path.abspath(__file__)), "config.json")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

probability = click.FloatRange(0.0, 1.0)
existing = click.Path(dir_okay=False)


@click.group()
@click.option("--verbose", is_flag=True, help="Log at DEBUG level.")
def cli(verbose: bool):
    """Boundary and degradation experiments for read classifiers."""
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger().setLevel(level)


@cli.command()
@click.option("--config", "config_path", type=existing, default=DEFAULT_CONFIG, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default=None, help="Output directory.")
@click.option("--seed", type=int, default=None, help="Overrides master_seed.")
@click.option("--replicate", type=click.IntRange(min=0), default=None)
def simulate(config_path, out, seed, replicate):
    """Simulate the training and validation reads of a config."""
    training, validation = scripts.simulate(config_path, out=out, seed=seed, replicate=replicate)
    click.echo(f"simulated {len(training)} training and {len(validation)} validation reads")


@cli.command()
@click.option("--reads", type=existing, required=True, help="Read CSV to degrade.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--kind", type=click.Choice([k.value for k in DegradationKind]), required=True)
@click.option("--p", "p", type=probability, required=True, help="The mechanism's main probability.")
@click.option("--sel-p", type=probability, default=None, help="Selection probability (selective, mixed).")
@click.option("--snp-fraction", type=probability, default=None, help="SNP branch share (mixed).")
@click.option("--label", "labels", multiple=True, help="Protected or targeted source (repeatable).")
@click.option("--target-label", default=None, help="Source to thin out (reduce).")
@click.option("--pool", type=existing, default=None, help="Superfluous pool read CSV.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--replicate", type=click.IntRange(min=0), default=0, show_default=True)
def degrade(reads, out, kind, p, sel_p, snp_fraction, labels, target_label, pool, seed, replicate):
    """Apply one degradation mechanism to a read CSV."""
    names = GRID_PARAMETERS[DegradationKind(kind)]
    params = {names[-1]: p}
    for name, value in (("sel_probability", sel_p), ("snp_fraction", snp_fraction)):
        if value is None:
            continue
        if name not in names:
            raise click.UsageError(f"{kind} degradation takes no {name}")
        params[name] = value
    missing = [n for n in names if n not in params]
    if missing:
        raise click.UsageError(f"{kind} degradation needs {', '.join(missing)}")
    degraded = scripts.degrade(
        reads,
        out,
        kind,
        params,
        seed,
        labels=labels,
        target_label=target_label,
        pool_path=pool,
        replicate=replicate,
    )
    click.echo(f"wrote {len(degraded)} reads to {out}")


@cli.command()
@click.option("--reads", type=existing, required=True, help="Training read CSV.")
@click.option("--kind", type=click.Choice([k.value for k in ClassifierKind]), required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Model JSON path.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--hyperparams", default=None, help="JSON object of hyperparameter overrides.")
def train(reads, kind, out, seed, workers, hyperparams):
    """Fit one classifier and save it."""
    try:
        overrides = json.loads(hyperparams) if hyperparams else None
    except json.JSONDecodeError as e:
        raise click.BadParameter(str(e), param_hint="--hyperparams") from None
    model = scripts.train(reads, kind, out, seed=seed, hyperparams=overrides, workers=workers)
    click.echo(f"trained {kind} on {len(model.label_set)} labels, saved to {out}")


@cli.command()
@click.option("--model", type=existing, required=True)
@click.option("--reads", type=existing, required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Confusion matrix CSV.")
def evaluate(model, reads, out):
    """Confusion matrix of a saved model on a read CSV."""
    cm = scripts.evaluate(model, reads, out)
    click.echo(f"{cm.correct} of {cm.total} correct")


@cli.command()
@click.option("--model", type=existing, required=True)
@click.option("--reads", type=existing, required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Boundary table CSV.")
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
def boundary(model, reads, out, workers):
    """Boundary status and neighbor similarity per read."""
    table = scripts.boundary(model, reads, out, workers=workers)
    click.echo(f"{int((table.bs > 0).sum())} of {len(table)} reads on the boundary")


@cli.command()
@click.option("--config", "config_path", type=existing, default=DEFAULT_CONFIG, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default=None, help="Run directory.")
@click.option("--seed", type=int, default=None, help="Overrides master_seed.")
@click.option("--workers", type=click.IntRange(min=1), default=None)
@click.option("--replicate", type=click.IntRange(min=0), default=None)
@click.option("--charts/--no-charts", default=True, show_default=True)
def experiment(config_path, out, seed, workers, replicate, charts):
    """Run a degradation grid and write its tables and charts."""
    result = scripts.experiment(
        config_path, seed=seed, workers=workers, out=out, replicate=replicate, charts=charts
    )
    click.echo(f"{len(result.points) - len(result.failed)} of {len(result.points)} grid points ok")
    if result.failed:
        raise ReadlabError(f"{len(result.failed)} grid points failed, see manifest.csv")


@cli.command()
@click.option("--from", "run_dir", type=click.Path(file_okay=False), required=True)
@click.option("--out", type=click.Path(file_okay=False), default=None, help="Defaults to <run>/charts.")
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
def report(run_dir, out, workers):
    """Render charts from a finished run directory."""
    paths = scripts.report(run_dir, out=out, workers=workers)
    click.echo(f"rendered {len(paths)} charts")


@cli.command("entropy-curve")
@click.option("--fasta", type=existing, default=None, help="Genome FASTA; the first record is used.")
@click.option("--length", type=click.IntRange(min=3), default=30000, show_default=True)
@click.option("--genome-seed", type=int, default=0, show_default=True, help="Markov genome seed without --fasta.")
@click.option("--iterations", type=click.IntRange(min=0), default=20, show_default=True)
@click.option("--p", "p", type=probability, default=0.5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), required=True)
def entropy_curve(fasta, length, genome_seed, iterations, p, seed, out):
    """Triplet entropy of a genome under repeated SNP degradation."""
    if fasta is not None:
        genome = GenomeSpec(id="genome", fasta=fasta)
    else:
        genome = GenomeSpec(id="genome", length=length, markov=MarkovParams.random(seed=genome_seed))
    curve = scripts.entropy(genome, iterations, p, seed, out)
    click.echo(f"entropy {curve[0][1]:.4f} -> {curve[-1][1]:.4f} bits")


def main(argv: Optional[List[str]] = None) -> int:
    try:
        code = cli.main(args=argv, prog_name="readlab", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except click.Abort:
        return EXIT_USAGE
    except (ReadlabError, FileNotFoundError) as e:
        click.echo(f"Error: {e}", err=True)
        return EXIT_DATA
    except ValueError as e:
        click.echo(f"Error: {e}", err=True)
        return EXIT_USAGE
    return code if isinstance(code, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
