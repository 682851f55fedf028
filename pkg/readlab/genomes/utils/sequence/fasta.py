import io
import logging
from typing import IO, Iterable, List, Tuple, Union

from readlab.genomes.utils.sequence.alphabet import first_illegal
from readlab.genomes.utils.sequence.records import (DatasetRole, DnaSequence,
                                                    LabelSet, ReadDataset,
                                                    ReadRecord)
from readlab.genomes.utils.tables import (read_versioned_csv,
                                          save_dataframe_as_csv)
from readlab.utils.errors import SequenceError

logger = logging.getLogger(__name__)

Source = Union[str, bytes, IO]


def _lines(source: Source) -> Iterable[str]:
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if isinstance(source, str):
        source = io.StringIO(source)
    for line in source:
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        yield line.rstrip("\r\n")


def parse_fasta(source: Source) -> List[Tuple[str, DnaSequence]]:
    """
    Parse FASTA text into (id, sequence) pairs in file order.
    Sequence lines may wrap; lowercase is normalized to uppercase.
    The id is the header text up to the first whitespace.
    """
    records: List[Tuple[str, DnaSequence]] = []
    current_id = None
    chunks: List[str] = []

    def _flush():
        if current_id is not None:
            records.append((current_id, DnaSequence("".join(chunks))))

    for line_no, line in enumerate(_lines(source), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith(">"):
            _flush()
            header = stripped[1:].strip()
            if not header:
                raise SequenceError("malformed header: empty id", line_no)
            current_id = header.split()[0]
            chunks = []
            continue
        if current_id is None:
            raise SequenceError("malformed FASTA: sequence before first header", line_no)
        bad = first_illegal(stripped)
        if bad >= 0:
            raise SequenceError(f"illegal character {stripped[bad]!r}", line_no)
        chunks.append(stripped)
    _flush()
    if not records:
        raise SequenceError("no FASTA records found")
    return records


def write_fasta(records: Iterable[Tuple[str, DnaSequence]], width: int = 0) -> str:
    out = []
    for rid, seq in records:
        out.append(f">{rid}\n")
        text = str(seq)
        if width > 0:
            out.extend(text[i : i + width] + "\n" for i in range(0, len(text), width))
        else:
            out.append(text + "\n")
    return "".join(out)


def read_fasta_file(path: str) -> List[Tuple[str, DnaSequence]]:
    with open(path, "r", encoding="utf-8") as f:
        return parse_fasta(f)


def write_labeled_fasta(dataset: ReadDataset) -> str:
    """Reads as `>id|label` records."""
    return write_fasta(
        (f"{rec.id}|{rec.label}", rec.sequence) for rec in dataset.records()
    )


def parse_labeled_fasta(
    source: Source, role: DatasetRole = DatasetRole.TRAINING
) -> ReadDataset:
    records = []
    for header, seq in parse_fasta(source):
        if "|" not in header:
            raise SequenceError(f"header {header!r} lacks '|label'")
        rid, label = header.rsplit("|", 1)
        records.append(ReadRecord(id=rid, sequence=seq, label=label))
    return ReadDataset.from_records(records, role=role)


def write_reads_csv(dataset: ReadDataset, path: str) -> str:
    """Canonical read CSV `id,label,sequence`."""
    return save_dataframe_as_csv(dataset.to_frame(), path, kind="reads")


def read_reads_csv(
    path: str,
    label_set: Union[LabelSet, None] = None,
    role: DatasetRole = DatasetRole.TRAINING,
) -> ReadDataset:
    df = read_versioned_csv(path, dtype=str)
    missing = {"id", "label", "sequence"} - set(df.columns)
    if missing:
        raise SequenceError(f"{path}: missing columns {sorted(missing)}")
    for row_no, seq in enumerate(df["sequence"], start=2):
        bad = first_illegal(seq)
        if bad >= 0:
            raise SequenceError(f"{path}: illegal character {seq[bad]!r}", row_no)
    logger.debug("Read %d reads from %s", len(df), path)
    return ReadDataset.from_strings(
        list(df["id"]), list(df["sequence"]), list(df["label"]), label_set, role
    )
