from typing import Optional

from readlab.genomes.utils.degrader.labels import degrade_mislabel
from readlab.genomes.utils.degrader.mixed import degrade_mixed
from readlab.genomes.utils.degrader.sampling import (degrade_reduce,
                                                     degrade_reverse,
                                                     degrade_superfluous)
from readlab.genomes.utils.degrader.snp import (degrade_selective_snp,
                                                degrade_snp,
                                                degrade_snp_filtered)
from readlab.genomes.utils.degrader.strategy import (DegradationKind,
                                                     DegradationSpec)
from readlab.genomes.utils.sequence.records import ReadDataset
from readlab.utils.errors import DataError


class DegradationContext:
    """Strategy to apply the mechanism named by a DegradationSpec."""

    def __init__(self, pool: Optional[ReadDataset] = None):
        self.pool = pool

    def degrade(self, dataset: ReadDataset, spec: DegradationSpec, seed: int) -> ReadDataset:
        kind = spec.kind
        if kind == DegradationKind.SNP:
            return degrade_snp(dataset, spec.snp_probability, seed)
        elif kind == DegradationKind.SELECTIVE_SNP:
            return degrade_selective_snp(
                dataset, spec.sel_probability, spec.snp_probability, seed
            )
        elif kind == DegradationKind.PROTECT_SOURCES:
            return degrade_snp_filtered(
                dataset, spec.snp_probability, "protect", spec.labels, seed
            )
        elif kind == DegradationKind.TARGET_SOURCES:
            return degrade_snp_filtered(
                dataset, spec.snp_probability, "target", spec.labels, seed
            )
        elif kind == DegradationKind.MISLABEL:
            return degrade_mislabel(dataset, spec.mislabel_probability, seed)
        elif kind == DegradationKind.REVERSE:
            return degrade_reverse(dataset, spec.reversal_probability, seed)
        elif kind == DegradationKind.REDUCE:
            return degrade_reduce(
                dataset, spec.removal_probability, spec.target_label, seed
            )
        elif kind == DegradationKind.SUPERFLUOUS:
            if self.pool is None:
                raise DataError("superfluous degradation needs a superfluous pool")
            return degrade_superfluous(dataset, self.pool, spec.add_probability, seed)
        elif kind == DegradationKind.MIXED:
            return degrade_mixed(
                dataset,
                spec.sel_probability,
                spec.snp_fraction,
                spec.snp_probability,
                seed,
            )
        raise Exception(f"Degradation kind {kind} not supported")
