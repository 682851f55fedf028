from .alphabet import BASES, SYMBOLS, Nucleotide
from .distance import hellinger
from .fasta import (parse_fasta, parse_labeled_fasta, read_fasta_file,
                    read_reads_csv, write_fasta, write_labeled_fasta,
                    write_reads_csv)
from .records import (ClassLabel, DatasetRole, DnaSequence, LabelSet,
                      ReadDataset, ReadRecord)
from .triplets import (TRIPLETS, TripletDistribution, triplet_distribution,
                       triplet_entropy, triplet_matrix)
