from .markov import GenomeSpec, MarkovParams, generate_genome
from .pool import (REFERENCE_POOL, PoolMember, build_superfluous_pool,
                   scaled_pool_counts)
from .reads import (ErrorModel, ReadSimulator, SimulationSpec, read_start,
                    simulate_read_count, simulate_reads)
