from readlab.genomes.utils.sequence.records import ReadDataset
from readlab.utils.errors import DataError
from readlab.utils.seeding import SELECTION, streams


def degrade_reverse(d: ReadDataset, p: float, seed: int) -> ReadDataset:
    """Reverse each read as a character string with probability p (no complement)."""
    selected = streams(seed)[SELECTION].random(len(d)) < p
    codes = d.codes.copy()
    codes[selected] = codes[selected, ::-1]
    return d.replace(codes=codes)


def degrade_reduce(d: ReadDataset, p: float, target_label: str, seed: int) -> ReadDataset:
    """Delete reads of target_label independently with probability p; order kept."""
    target = d.label_set.index(target_label)
    selected = streams(seed)[SELECTION].random(len(d)) < p
    removed = selected & (d.labels == target)
    if removed.all():
        raise DataError("reduction removed every read")
    return d.subset(~removed)


def degrade_superfluous(
    d: ReadDataset, pool: ReadDataset, p: float, seed: int
) -> ReadDataset:
    """
    Append each pool read independently with probability p. The label set is always
    the union of both, so every grid point shares one output space.
    """
    added = streams(seed)[SELECTION].random(len(pool)) < p
    label_set = d.label_set.union(pool.label_set)
    if not added.any():
        return d.replace(label_set=label_set)
    return d.concat(pool.subset(added))
