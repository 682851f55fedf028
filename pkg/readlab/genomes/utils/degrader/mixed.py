from readlab.genomes.utils.degrader.labels import relabel, relabel_offsets
from readlab.genomes.utils.degrader.snp import (apply_substitution,
                                                substitution_draws)
from readlab.genomes.utils.sequence.records import ReadDataset
from readlab.utils.seeding import (BRANCH, RELABEL, SELECTION, SUBSTITUTION,
                                   streams)


def degrade_mixed(
    d: ReadDataset, sel_p: float, snp_fraction: float, snp_p: float, seed: int
) -> ReadDataset:
    """
    Reads are selected with probability sel_p; a selected read is SNP-degraded at
    snp_p with probability snp_fraction and mislabeled otherwise.
    """
    rngs = streams(seed)
    n, K = len(d), len(d.label_set)
    selected = rngs[SELECTION].random(n) < sel_p
    to_snp = rngs[BRANCH].random(n) < snp_fraction
    draws = substitution_draws(rngs[SUBSTITUTION], d.codes.shape)
    offsets = relabel_offsets(rngs[RELABEL], n, K)

    codes = apply_substitution(d.codes, draws, snp_p, rows=selected & to_snp)
    labels = relabel(d.labels, selected & ~to_snp, offsets, K)
    return d.replace(codes=codes, labels=labels)
