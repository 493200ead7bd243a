"""Finite fuzzy relations and their compositions.

A :class:`Relation` is a dense ``|source| x |target|`` matrix of raw truth
values over one lattice.  The composition kernels (``*_array``) operate on
raw arrays with arbitrary leading batch dimensions; the exhaustive search
drives them directly on whole batches of relations at once.

    circle  (R o S)_ik  = join_j  R_ij  *  S_jk
    sub     (R <| S)_ik = meet_j  R_ij -> S_jk
    sup     (R |> S)_ik = meet_j  S_jk -> R_ij
    square  (R [] S)_ik = meet_j  R_ij <-> S_jk
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import LatticeMismatchError, UnsupportedLatticeError, WiringError
from .lattice import Lattice, TruthValue


@dataclass(frozen=True)
class DomainSig:
    """A named, ordered carrier set.

    Two domains are wired together when their label sequences agree; the
    name is only used in diagnostics.
    """

    name: str
    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise ValueError(f"domain {self.name!r} must have at least one element")
        if len(set(labels)) != len(labels):
            raise ValueError(f"domain {self.name!r} has duplicate labels")

    @classmethod
    def range(cls, name: str, size: int, prefix: str | None = None) -> "DomainSig":
        prefix = name.lower() if prefix is None else prefix
        return cls(name, tuple(f"{prefix}{i}" for i in range(size)))

    def __len__(self):
        return len(self.labels)

    def matches(self, other: "DomainSig") -> bool:
        return self.labels == other.labels

    def __str__(self):
        return f"{self.name}{{{', '.join(self.labels)}}}"


class Relation:
    """An immutable fuzzy relation from ``source`` to ``target``."""

    __slots__ = ("lattice", "matrix", "source", "target", "name")

    def __init__(self, lattice: Lattice, matrix, source: DomainSig | None = None,
                 target: DomainSig | None = None, name: str = "R"):
        arr = lattice.asarray(matrix)
        if arr.ndim != 2:
            raise ValueError(f"relation {name!r}: matrix must be 2-dimensional")
        n, m = arr.shape
        if source is None:
            source = DomainSig.range(f"dom({name})", n, "x")
        if target is None:
            target = DomainSig.range(f"cod({name})", m, "y")
        if (len(source), len(target)) != (n, m):
            raise ValueError(
                f"relation {name!r}: matrix is {n}x{m} but domains are "
                f"{len(source)}x{len(target)}")
        arr.flags.writeable = False
        self.lattice = lattice
        self.matrix = arr
        self.source = source
        self.target = target
        self.name = name

    @classmethod
    def identity(cls, lattice: Lattice, domain: DomainSig, name="E") -> "Relation":
        n = len(domain)
        arr = np.where(np.eye(n, dtype=bool), lattice.top, lattice.bottom)
        return cls(lattice, arr, domain, domain, name)

    @classmethod
    def constant(cls, lattice: Lattice, source: DomainSig, target: DomainSig, value,
                 name="R") -> "Relation":
        arr = np.full((len(source), len(target)), value)
        return cls(lattice, arr, source, target, name)

    @classmethod
    def zeros(cls, lattice, source, target, name="0"):
        return cls.constant(lattice, source, target, lattice.bottom, name)

    @classmethod
    def ones(cls, lattice, source, target, name="1"):
        return cls.constant(lattice, source, target, lattice.top, name)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def __getitem__(self, ij) -> TruthValue:
        return TruthValue(self.lattice, self.matrix[ij])

    def renamed(self, name: str) -> "Relation":
        return Relation(self.lattice, self.matrix, self.source, self.target, name)

    @property
    def T(self) -> "Relation":
        return converse(self)

    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented
        return (self.lattice == other.lattice
                and self.source.matches(other.source)
                and self.target.matches(other.target)
                and bool(np.all(self.lattice.eq(self.matrix, other.matrix))))

    __hash__ = None

    def __repr__(self):
        rows = "; ".join(" ".join(self.lattice.format_value(v) for v in row)
                         for row in self.matrix)
        return f"Relation({self.name}: {self.source} -> {self.target} [{rows}])"


# --------------------------------------------------------------------------
# Array kernels (leading batch dimensions allowed)


def circle_array(lat: Lattice, r, s):
    return lat.join_reduce(lat.tensor(r[..., :, :, None], s[..., None, :, :]), -2)


def sub_array(lat: Lattice, r, s):
    return lat.meet_reduce(lat.residuum(r[..., :, :, None], s[..., None, :, :]), -2)


def sup_array(lat: Lattice, r, s):
    return lat.meet_reduce(lat.residuum(s[..., None, :, :], r[..., :, :, None]), -2)


def square_array(lat: Lattice, r, s):
    return lat.meet_reduce(lat.biresiduum(r[..., :, :, None], s[..., None, :, :]), -2)


def converse_array(r):
    return np.swapaxes(r, -1, -2)


def included_array(lat: Lattice, r, s):
    """Batched inclusion test, reducing the last two axes."""
    return np.all(lat.leq(r, s), axis=(-2, -1))


def equal_array(lat: Lattice, r, s):
    return np.all(lat.eq(r, s), axis=(-2, -1))


class Connective(Enum):
    """The inner connective of a BK-product."""

    SUB = "sub"
    SUP = "sup"
    SQUARE = "square"


def _connective_values(lat: Lattice, r, s, kind: Connective):
    ri = r[..., :, :, None]
    sk = s[..., None, :, :]
    if kind is Connective.SUB:
        return lat.residuum(ri, sk)
    if kind is Connective.SUP:
        return lat.residuum(sk, ri)
    return lat.biresiduum(ri, sk)


# --------------------------------------------------------------------------
# Relation-level operations


def _same_lattice(r: Relation, s: Relation) -> Lattice:
    if r.lattice != s.lattice:
        raise LatticeMismatchError(
            f"{r.name} is over {r.lattice.name!r} but {s.name} is over {s.lattice.name!r}")
    return r.lattice


def _composable(r: Relation, s: Relation) -> Lattice:
    lat = _same_lattice(r, s)
    if not r.target.matches(s.source):
        raise WiringError(
            f"cannot compose {r.name}: {r.source} -> {r.target} with "
            f"{s.name}: {s.source} -> {s.target}; middle domains differ "
            f"({r.target} vs {s.source})")
    return lat


def _same_shape(r: Relation, s: Relation) -> Lattice:
    lat = _same_lattice(r, s)
    if not (r.source.matches(s.source) and r.target.matches(s.target)):
        raise WiringError(
            f"cannot compare {r.name}: {r.source} -> {r.target} with "
            f"{s.name}: {s.source} -> {s.target}")
    return lat


def _product(op: str, r: Relation, s: Relation, arr) -> Relation:
    return Relation(r.lattice, arr, r.source, s.target, f"({r.name} {op} {s.name})")


def converse(r: Relation) -> Relation:
    name = r.name[:-1] if r.name.endswith("'") else r.name + "'"
    return Relation(r.lattice, converse_array(r.matrix), r.target, r.source, name)


def included_in(r: Relation, s: Relation) -> bool:
    """Pointwise order ``r <= s``."""
    lat = _same_shape(r, s)
    return bool(included_array(lat, r.matrix, s.matrix))


def equals(r: Relation, s: Relation) -> bool:
    lat = _same_shape(r, s)
    return bool(equal_array(lat, r.matrix, s.matrix))


def circle(r: Relation, s: Relation) -> Relation:
    lat = _composable(r, s)
    return _product("o", r, s, circle_array(lat, r.matrix, s.matrix))


def sub(r: Relation, s: Relation) -> Relation:
    lat = _composable(r, s)
    return _product("<|", r, s, sub_array(lat, r.matrix, s.matrix))


def sup(r: Relation, s: Relation) -> Relation:
    lat = _composable(r, s)
    return _product("|>", r, s, sup_array(lat, r.matrix, s.matrix))


def square(r: Relation, s: Relation) -> Relation:
    lat = _composable(r, s)
    return _product("[]", r, s, square_array(lat, r.matrix, s.matrix))


def mean_product(r: Relation, s: Relation, kind: Connective | str) -> Relation:
    """BK-product whose outer aggregation is the arithmetic mean over the middle domain."""
    kind = Connective(kind)
    lat = _composable(r, s)
    if not lat.is_unit_interval:
        raise UnsupportedLatticeError(
            f"mean products need numeric truth values; {lat.name!r} is a table lattice")
    vals = _connective_values(lat, r.matrix, s.matrix, kind)
    op = {Connective.SUB: "m<|", Connective.SUP: "m|>", Connective.SQUARE: "m[]"}[kind]
    return _product(op, r, s, np.mean(vals, axis=-2))


def is_crisp(r: Relation) -> bool:
    lat = r.lattice
    m = r.matrix
    return bool(np.all(lat.eq(m, lat.bottom) | lat.eq(m, lat.top)))


def _ones_per_row(r: Relation) -> np.ndarray:
    return np.sum(r.lattice.eq(r.matrix, r.lattice.top), axis=1)


def is_univalent(r: Relation) -> bool:
    """Crisp, with at most one successor per source element."""
    return is_crisp(r) and bool(np.all(_ones_per_row(r) <= 1))


def is_covering(r: Relation) -> bool:
    """Crisp, with at least one successor per source element."""
    return is_crisp(r) and bool(np.all(_ones_per_row(r) >= 1))

