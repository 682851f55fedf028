from .neighbors import enumerate_neighbors, neighbor_codes, neighbor_count
from .paths import (all_hamming_paths, hamming_distance, hamming_path,
                    locate_boundary_pair)
from .status import (BoundaryReport, BoundaryTable, boundary_report,
                     boundary_status, boundary_table, bs_distribution,
                     neighbor_similarity)
