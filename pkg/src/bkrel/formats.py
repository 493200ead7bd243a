"""Reading and writing relations and lattices.

Relation CSV layout: cell (0, 0) holds the relation name, the rest of row 0
the target labels, the rest of column 0 the source labels; body cells hold
decimals in [0, 1] or element names of a table lattice.  The JSON layout
carries the same information::

    {"name": "R", "source": {"name": "A", "labels": [...]},
     "target": {"name": "B", "labels": [...]}, "matrix": [[...], ...]}

Lattice JSON layout: ``{"names", "leq", "tensor", "residuum"?, "bottom", "top"}``.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .lattice import FiniteLattice, Lattice, builtin_lattice
from .relation import DomainSig, Relation


def relation_from_rows(rows: list[list[str]], lattice: Lattice, name: str | None = None) -> Relation:
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if len(rows) < 2 or len(rows[0]) < 2:
        raise ValueError("relation CSV needs a header row and at least one data row")
    header = [c.strip() for c in rows[0]]
    rel_name = name or header[0] or "R"
    target = header[1:]
    source = []
    matrix = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ValueError(f"row {lineno} has {len(row)} cells, expected {len(header)}")
        source.append(row[0].strip())
        try:
            matrix.append([lattice.parse_value(cell) for cell in row[1:]])
        except ValueError as exc:
            raise ValueError(f"row {lineno}: {exc}") from None
    return Relation(lattice, matrix, DomainSig(f"dom({rel_name})", tuple(source)),
                    DomainSig(f"cod({rel_name})", tuple(target)), rel_name)


def read_relation_csv(source, lattice: Lattice, name: str | None = None) -> Relation:
    """Read a relation from a CSV path or an open text stream."""
    if hasattr(source, "read"):
        return relation_from_rows(list(csv.reader(source)), lattice, name)
    with open(source, newline="") as fh:
        return relation_from_rows(list(csv.reader(fh)), lattice, name)


def relation_to_csv(rel: Relation) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([rel.name, *rel.target.labels])
    for label, row in zip(rel.source.labels, rel.matrix):
        w.writerow([label, *(rel.lattice.format_value(v) for v in row)])
    return buf.getvalue()


def relation_to_dict(rel: Relation) -> dict:
    fmt = rel.lattice.format_value
    return {
        "name": rel.name,
        "lattice": rel.lattice.name,
        "source": {"name": rel.source.name, "labels": list(rel.source.labels)},
        "target": {"name": rel.target.name, "labels": list(rel.target.labels)},
        "matrix": [[float(v) if rel.lattice.is_unit_interval else fmt(v) for v in row]
                   for row in rel.matrix],
    }


def relation_from_dict(data: dict, lattice: Lattice, name: str | None = None) -> Relation:
    name = name or data.get("name", "R")

    def value(v):
        return lattice.parse_value(v if isinstance(v, str) else repr(v))

    matrix = [[value(v) for v in row] for row in data["matrix"]]
    src = data.get("source")
    tgt = data.get("target")
    source = DomainSig(src["name"], tuple(src["labels"])) if src else None
    target = DomainSig(tgt["name"], tuple(tgt["labels"])) if tgt else None
    return Relation(lattice, matrix, source, target, name)


def read_relation(path, lattice: Lattice, name: str | None = None) -> Relation:
    """Read a relation file, choosing the format by extension (.json or CSV)."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        return relation_from_dict(json.loads(path.read_text()), lattice, name)
    return read_relation_csv(path, lattice, name)


def write_relation(rel: Relation, path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".json":
        path.write_text(json.dumps(relation_to_dict(rel), indent=2) + "\n")
    else:
        path.write_text(relation_to_csv(rel))


def read_lattice_json(path, check: bool = True) -> FiniteLattice:
    path = Path(path)
    data = json.loads(path.read_text())
    return FiniteLattice.from_dict(data, name=data.get("name", path.stem), check=check)


def lattice_from_spec(spec: str, check: bool = True) -> Lattice:
    """``godel | lukasiewicz | product | nilmin | boolean | ... | table:<path>``.

    A bare path to an existing ``.json`` file is accepted as well.
    """
    if spec.startswith("table:"):
        return read_lattice_json(spec[len("table:"):], check=check)
    if spec.lower().endswith(".json") and Path(spec).exists():
        return read_lattice_json(spec, check=check)
    return builtin_lattice(spec)
