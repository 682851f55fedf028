from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple


class DegradationKind(str, Enum):
    SNP = "snp"
    SELECTIVE_SNP = "selective_snp"
    PROTECT_SOURCES = "protect_sources"
    TARGET_SOURCES = "target_sources"
    MISLABEL = "mislabel"
    REVERSE = "reverse"
    REDUCE = "reduce"
    SUPERFLUOUS = "superfluous"
    MIXED = "mixed"


# Grid parameters per kind, in the order they enter seeds and CSV columns.
GRID_PARAMETERS: Dict[DegradationKind, Tuple[str, ...]] = {
    DegradationKind.SNP: ("snp_probability",),
    DegradationKind.SELECTIVE_SNP: ("sel_probability", "snp_probability"),
    DegradationKind.PROTECT_SOURCES: ("snp_probability",),
    DegradationKind.TARGET_SOURCES: ("snp_probability",),
    DegradationKind.MISLABEL: ("mislabel_probability",),
    DegradationKind.REVERSE: ("reversal_probability",),
    DegradationKind.REDUCE: ("removal_probability",),
    DegradationKind.SUPERFLUOUS: ("add_probability",),
    DegradationKind.MIXED: ("sel_probability", "snp_fraction", "snp_probability"),
}

PROBABILITY_FIELDS = (
    "snp_probability",
    "sel_probability",
    "snp_fraction",
    "mislabel_probability",
    "reversal_probability",
    "removal_probability",
    "add_probability",
)


@dataclass(frozen=True)
class DegradationSpec:
    kind: DegradationKind
    snp_probability: float = 0.0
    sel_probability: float = 0.0
    snp_fraction: float = 0.0
    mislabel_probability: float = 0.0
    reversal_probability: float = 0.0
    removal_probability: float = 0.0
    add_probability: float = 0.0

    # protect/target label sets
    labels: Tuple[str, ...] = field(default_factory=tuple)
    # reduce
    target_label: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", DegradationKind(self.kind))
        object.__setattr__(self, "labels", tuple(self.labels))
        for name in PROBABILITY_FIELDS:
            value = getattr(self, name)
            if not 0.0 <= float(value) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if self.kind == DegradationKind.REDUCE and not self.target_label:
            raise ValueError("reduce degradation needs a target_label")
        if (
            self.kind in (DegradationKind.PROTECT_SOURCES, DegradationKind.TARGET_SOURCES)
            and not self.labels
        ):
            raise ValueError(f"{self.kind.value} degradation needs labels")

    @property
    def parameter_names(self) -> Tuple[str, ...]:
        return GRID_PARAMETERS[self.kind]

    def parameter_values(self) -> Tuple[float, ...]:
        return tuple(float(getattr(self, name)) for name in self.parameter_names)

    @property
    def seed_label(self) -> str:
        """Mechanism string entering derive_seed; includes the kind's fixed choices."""
        extra = ""
        if self.labels:
            extra = ":" + "+".join(self.labels)
        if self.target_label:
            extra = ":" + self.target_label
        return f"{self.kind.value}{extra}"
