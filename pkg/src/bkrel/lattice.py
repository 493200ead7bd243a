"""Truth-value algebras: residuated lattices on [0, 1] and on finite carriers.

Every lattice exposes its operations in vectorised form: the arguments are
numpy arrays of *raw* values (floats in [0, 1] for the built-in t-norm
lattices, integer carrier indices for table-defined lattices) and the result
broadcasts like any numpy ufunc.  The relation kernels and the exhaustive
search are written against this raw interface.

For scalar work there is :class:`TruthValue`, a raw value bound to its
lattice, together with the module level functions :func:`tensor`,
:func:`residuum`, :func:`meet`, :func:`join`, :func:`leq` and
:func:`biresiduum`, which refuse to mix lattices.
"""

from __future__ import annotations

import functools
import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import LatticeAxiomError, LatticeMismatchError

EPS = 1e-9
"""Absolute tolerance for comparisons of unit-interval values."""


class Lattice(ABC):
    """A complete residuated lattice ``(L, <=, meet, join, tensor, ->, 0, 1)``."""

    name: str = "lattice"
    is_unit_interval: bool = False

    @property
    @abstractmethod
    def bottom(self) -> Any: ...

    @property
    @abstractmethod
    def top(self) -> Any: ...

    @abstractmethod
    def tensor(self, a, b) -> np.ndarray: ...

    @abstractmethod
    def residuum(self, a, b) -> np.ndarray: ...

    @abstractmethod
    def meet(self, a, b) -> np.ndarray: ...

    @abstractmethod
    def join(self, a, b) -> np.ndarray: ...

    @abstractmethod
    def leq(self, a, b) -> np.ndarray: ...

    @abstractmethod
    def eq(self, a, b) -> np.ndarray: ...

    @abstractmethod
    def meet_reduce(self, x, axis: int) -> np.ndarray: ...

    @abstractmethod
    def join_reduce(self, x, axis: int) -> np.ndarray: ...

    @abstractmethod
    def asarray(self, values) -> np.ndarray:
        """Convert raw values to this lattice's array dtype, validating them."""

    @abstractmethod
    def samples(self, grid: int) -> np.ndarray:
        """Return the carrier (finite lattices) or a uniform grid on [0, 1]."""

    @abstractmethod
    def parse_value(self, text: str) -> Any: ...

    @abstractmethod
    def format_value(self, raw) -> str: ...

    def biresiduum(self, a, b) -> np.ndarray:
        return self.meet(self.residuum(a, b), self.residuum(b, a))

    def value(self, raw) -> "TruthValue":
        return TruthValue(self, raw)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name!r}>"


# --------------------------------------------------------------------------
# Built-in t-norm lattices on [0, 1]


class UnitIntervalLattice(Lattice):
    """[0, 1] with min/max as meet/join and a left-continuous t-norm."""

    is_unit_interval = True

    @property
    def bottom(self) -> float:
        return 0.0

    @property
    def top(self) -> float:
        return 1.0

    def meet(self, a, b):
        return np.minimum(a, b)

    def join(self, a, b):
        return np.maximum(a, b)

    def leq(self, a, b):
        return np.asarray(a) <= np.asarray(b) + EPS

    def eq(self, a, b):
        return np.abs(np.asarray(a) - np.asarray(b)) <= EPS

    def meet_reduce(self, x, axis):
        return np.min(x, axis=axis)

    def join_reduce(self, x, axis):
        return np.max(x, axis=axis)

    def asarray(self, values):
        arr = np.array(values, dtype=np.float64)
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"{self.name}: truth values must be finite numbers")
        if np.any(arr < -EPS) or np.any(arr > 1 + EPS):
            raise ValueError(f"{self.name}: truth values must lie in [0, 1]")
        return np.clip(arr, 0.0, 1.0)

    def samples(self, grid):
        if grid < 2:
            raise ValueError("grid must have at least 2 points")
        return np.linspace(0.0, 1.0, grid)

    def parse_value(self, text):
        return float(self.asarray(float(text)))

    def format_value(self, raw):
        s = f"{float(raw):.9f}".rstrip("0").rstrip(".")
        return "0" if s in ("", "-0") else s

    def __eq__(self, other):
        return type(self) is type(other)

    def __hash__(self):
        return hash(type(self))


class Godel(UnitIntervalLattice):
    name = "godel"

    def tensor(self, a, b):
        return np.minimum(a, b)

    def residuum(self, a, b):
        return np.where(self.leq(a, b), 1.0, b)


class Lukasiewicz(UnitIntervalLattice):
    name = "lukasiewicz"

    def tensor(self, a, b):
        return np.maximum(0.0, np.asarray(a) + np.asarray(b) - 1.0)

    def residuum(self, a, b):
        return np.minimum(1.0, 1.0 - np.asarray(a) + np.asarray(b))


class Product(UnitIntervalLattice):
    name = "product"

    def tensor(self, a, b):
        return np.asarray(a) * np.asarray(b)

    def residuum(self, a, b):
        a = np.asarray(a, dtype=np.float64)
        b = np.asarray(b, dtype=np.float64)
        # a == 0 always lands in the first branch, so the division is safe
        safe = np.where(a > 0.0, a, 1.0)
        with np.errstate(over="ignore"):
            ratio = b / safe
        return np.where(self.leq(a, b), 1.0, np.minimum(1.0, ratio))


class NilpotentMin(UnitIntervalLattice):
    name = "nilmin"

    def tensor(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        # left-continuous: a + b == 1 (up to EPS) still maps to 0
        return np.where(a + b > 1.0 + EPS, np.minimum(a, b), 0.0)

    def residuum(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        return np.where(self.leq(a, b), 1.0, np.maximum(1.0 - a, b))


# --------------------------------------------------------------------------
# Table-defined finite lattices

_MISSING = -1


def _table(values, n: int, what: str, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    if arr.shape != (n, n):
        raise ValueError(f"{what} table must be {n}x{n}, got shape {arr.shape}")
    if dtype is not bool and (np.any(arr < 0) or np.any(arr >= n)):
        raise ValueError(f"{what} table entries must be carrier indices 0..{n - 1}")
    return arr


def _greatest(candidates: Sequence[int], leq: np.ndarray) -> int:
    for c in candidates:
        if all(leq[d, c] for d in candidates):
            return c
    return _MISSING


def _least(candidates: Sequence[int], leq: np.ndarray) -> int:
    for c in candidates:
        if all(leq[c, d] for d in candidates):
            return c
    return _MISSING


class FiniteLattice(Lattice):
    """A residuated lattice on ``{0, ..., n-1}`` given by operation tables.

    Meet and join are derived from the order table.  When ``residuum`` is
    omitted it is derived as the greatest ``c`` with ``a * c <= b``.  With
    ``check=True`` (the default) every axiom is verified exhaustively and a
    :class:`LatticeAxiomError` carrying the validation report is raised on
    failure; ``check=False`` keeps a broken table around so that it can be
    inspected with :func:`validate_lattice`.
    """

    def __init__(self, names, leq, tensor, residuum=None, bottom=None, top=None,
                 name="table", check=True):
        names = tuple(str(x) for x in names)
        n = len(names)
        if n == 0:
            raise ValueError("a finite lattice needs at least one element")
        if len(set(names)) != n:
            raise ValueError("element names must be unique")
        self.name = name
        self.names = names
        self.size = n
        self._index = {s: i for i, s in enumerate(names)}
        self._leq = _table(leq, n, "leq", bool)
        self._tensor = _table(tensor, n, "tensor", np.intp)

        carrier = range(n)
        self._meet = np.full((n, n), _MISSING, dtype=np.intp)
        self._join = np.full((n, n), _MISSING, dtype=np.intp)
        for a, b in itertools.product(carrier, carrier):
            lower = [c for c in carrier if self._leq[c, a] and self._leq[c, b]]
            upper = [c for c in carrier if self._leq[a, c] and self._leq[b, c]]
            self._meet[a, b] = _greatest(lower, self._leq)
            self._join[a, b] = _least(upper, self._leq)

        if bottom is None:
            bottom = _least(list(carrier), self._leq)
        if top is None:
            top = _greatest(list(carrier), self._leq)
        self._bottom = int(bottom)
        self._top = int(top)

        if residuum is None:
            self._residuum = np.full((n, n), _MISSING, dtype=np.intp)
            for a, b in itertools.product(carrier, carrier):
                sols = [c for c in carrier if self._leq[self._tensor[a, c], b]]
                self._residuum[a, b] = _greatest(sols, self._leq)
            self.residuum_derived = True
        else:
            self._residuum = _table(residuum, n, "residuum", np.intp)
            self.residuum_derived = False

        for t in (self._leq, self._tensor, self._residuum, self._meet, self._join):
            t.flags.writeable = False

        if check:
            report = validate_lattice(self)
            if not report.ok:
                raise LatticeAxiomError(
                    f"lattice {name!r} violates the residuated-lattice axioms:\n"
                    + report.format(failures_only=True),
                    report,
                )

    @classmethod
    def from_dict(cls, data: dict, name="table", check=True) -> "FiniteLattice":
        """Build from the JSON layout ``{names, leq, tensor, residuum?, bottom, top}``."""
        try:
            names = data["names"]
            leq = data["leq"]
            tensor = data["tensor"]
        except KeyError as exc:
            raise ValueError(f"lattice description lacks the {exc.args[0]!r} field") from None
        return cls(names, leq, tensor, residuum=data.get("residuum"),
                   bottom=data.get("bottom"), top=data.get("top"),
                   name=data.get("name", name), check=check)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "names": list(self.names),
            "leq": self._leq.tolist(),
            "tensor": self._tensor.tolist(),
            "residuum": self._residuum.tolist(),
            "bottom": self._bottom,
            "top": self._top,
        }

    @property
    def complete(self) -> bool:
        """True when meet, join, residuum and both bounds are all defined."""
        return (self._bottom != _MISSING and self._top != _MISSING
                and not any(np.any(t == _MISSING)
                            for t in (self._meet, self._join, self._residuum)))

    def missing_entries(self) -> dict:
        out = {}
        for what, t in (("meet", self._meet), ("join", self._join),
                        ("residuum", self._residuum)):
            bad = np.argwhere(t == _MISSING)
            if len(bad):
                out[what] = [tuple(int(v) for v in ab) for ab in bad]
        return out

    @property
    def bottom(self):
        return self._bottom

    @property
    def top(self):
        return self._top

    def tensor(self, a, b):
        return self._tensor[np.asarray(a), np.asarray(b)]

    def residuum(self, a, b):
        return self._residuum[np.asarray(a), np.asarray(b)]

    def meet(self, a, b):
        return self._meet[np.asarray(a), np.asarray(b)]

    def join(self, a, b):
        return self._join[np.asarray(a), np.asarray(b)]

    def leq(self, a, b):
        return self._leq[np.asarray(a), np.asarray(b)]

    def eq(self, a, b):
        return np.asarray(a) == np.asarray(b)

    def meet_reduce(self, x, axis):
        return functools.reduce(self.meet, np.moveaxis(np.asarray(x), axis, 0))

    def join_reduce(self, x, axis):
        return functools.reduce(self.join, np.moveaxis(np.asarray(x), axis, 0))

    def asarray(self, values):
        arr = np.array(values)
        if arr.size and arr.dtype.kind not in "iu":
            if arr.dtype.kind == "f" and np.all(arr == np.round(arr)):
                arr = arr.astype(np.intp)
            else:
                raise ValueError(f"{self.name}: values must be carrier indices")
        arr = arr.astype(np.intp)
        if np.any(arr < 0) or np.any(arr >= self.size):
            raise ValueError(f"{self.name}: carrier index out of range 0..{self.size - 1}")
        return arr

    def samples(self, grid=None):
        return np.arange(self.size, dtype=np.intp)

    def parse_value(self, text):
        text = text.strip()
        if text in self._index:
            return self._index[text]
        raise ValueError(f"{text!r} is not an element of lattice {self.name!r} "
                         f"(elements: {', '.join(self.names)})")

    def format_value(self, raw):
        return self.names[int(raw)]

    def _key(self):
        return (self.names, self._leq.tobytes(), self._tensor.tobytes(),
                self._residuum.tobytes(), self._bottom, self._top)

    def __eq__(self, other):
        return isinstance(other, FiniteLattice) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())


def _chain_names(n: int) -> list[str]:
    return [f"{k / (n - 1):.4f}".rstrip("0").rstrip(".") for k in range(n)]


def _chain_leq(n: int) -> list[list[bool]]:
    return [[i <= j for j in range(n)] for i in range(n)]


def boolean() -> FiniteLattice:
    """The two-element Boolean algebra as a residuated lattice."""
    return FiniteLattice(["0", "1"], _chain_leq(2), [[0, 0], [0, 1]],
                         bottom=0, top=1, name="boolean")


def lukasiewicz_chain(n: int) -> FiniteLattice:
    """The ``n``-element Lukasiewicz chain ``{0, 1/(n-1), ..., 1}``."""
    if n < 2:
        raise ValueError("a chain needs at least 2 elements")
    m = n - 1
    tensor = [[max(0, i + j - m) for j in range(n)] for i in range(n)]
    res = [[min(m, m - i + j) for j in range(n)] for i in range(n)]
    return FiniteLattice(_chain_names(n), _chain_leq(n), tensor, res,
                         bottom=0, top=m, name=f"lukasiewicz{n}")


def godel_chain(n: int) -> FiniteLattice:
    """The ``n``-element Goedel chain."""
    if n < 2:
        raise ValueError("a chain needs at least 2 elements")
    m = n - 1
    tensor = [[min(i, j) for j in range(n)] for i in range(n)]
    res = [[m if i <= j else j for j in range(n)] for i in range(n)]
    return FiniteLattice(_chain_names(n), _chain_leq(n), tensor, res,
                         bottom=0, top=m, name=f"godel{n}")


BUILTINS = {
    "godel": Godel,
    "lukasiewicz": Lukasiewicz,
    "product": Product,
    "nilmin": NilpotentMin,
    "boolean": boolean,
    "lukasiewicz3": lambda: lukasiewicz_chain(3),
    "godel3": lambda: godel_chain(3),
}


def builtin_lattice(name: str) -> Lattice:
    try:
        return BUILTINS[name.lower()]()
    except KeyError:
        raise ValueError(f"unknown lattice {name!r}; choose one of "
                         f"{', '.join(BUILTINS)} or table:<path>") from None


# --------------------------------------------------------------------------
# Scalar truth values


@dataclass(frozen=True, eq=False)
class TruthValue:
    """A single truth value bound to one lattice."""

    lattice: Lattice
    raw: Any

    def __post_init__(self):
        arr = self.lattice.asarray(self.raw)
        if arr.ndim != 0:
            raise ValueError("a TruthValue holds a single value")
        object.__setattr__(self, "raw", arr.item())

    def __eq__(self, other):
        if not isinstance(other, TruthValue):
            return NotImplemented
        return self.lattice == other.lattice and bool(self.lattice.eq(self.raw, other.raw))

    __hash__ = None

    def __float__(self):
        if self.lattice.is_unit_interval:
            return float(self.raw)
        raise TypeError(f"element of {self.lattice.name!r} has no numeric value")

    def __repr__(self):
        return f"TruthValue({self.lattice.name}, {self.lattice.format_value(self.raw)})"

    def __str__(self):
        return self.lattice.format_value(self.raw)


def _common(a: TruthValue, b: TruthValue) -> Lattice:
    if a.lattice != b.lattice:
        raise LatticeMismatchError(
            f"operands belong to different lattices: {a.lattice.name!r} and {b.lattice.name!r}")
    return a.lattice


def _wrap(lat: Lattice, raw) -> TruthValue:
    return TruthValue(lat, np.asarray(raw).item())


def tensor(a: TruthValue, b: TruthValue) -> TruthValue:
    lat = _common(a, b)
    return _wrap(lat, lat.tensor(a.raw, b.raw))


def residuum(a: TruthValue, b: TruthValue) -> TruthValue:
    lat = _common(a, b)
    return _wrap(lat, lat.residuum(a.raw, b.raw))


def meet(a: TruthValue, b: TruthValue) -> TruthValue:
    lat = _common(a, b)
    return _wrap(lat, lat.meet(a.raw, b.raw))


def join(a: TruthValue, b: TruthValue) -> TruthValue:
    lat = _common(a, b)
    return _wrap(lat, lat.join(a.raw, b.raw))


def leq(a: TruthValue, b: TruthValue) -> bool:
    lat = _common(a, b)
    return bool(lat.leq(a.raw, b.raw))


def biresiduum(a: TruthValue, b: TruthValue) -> TruthValue:
    lat = _common(a, b)
    return _wrap(lat, lat.biresiduum(a.raw, b.raw))


def galois_residuum_oracle(a: TruthValue, b: TruthValue, grid: int = 1001) -> TruthValue:
    """Brute-force residuum: the largest sampled ``c`` with ``a * c <= b``.

    Uses nothing but the tensor and the order, so it is independent of the
    closed-form residua.  On [0, 1] the result is exact up to ``1 / grid``.
    """
    lat = _common(a, b)
    cands = lat.samples(grid)
    ok = lat.leq(lat.tensor(a.raw, cands), b.raw)
    return _wrap(lat, lat.join_reduce(cands[ok], 0))


def galois_residuum_grid(lat: Lattice, a_vals, b_vals, grid: int = 1001) -> np.ndarray:
    """:func:`galois_residuum_oracle` for every pair in ``a_vals`` x ``b_vals``.

    On [0, 1] the join is a maximum, so for each ``a`` the products ``a * c``
    are sorted once and every ``b`` reads a prefix maximum of the candidates.
    No monotonicity of the tensor is assumed.
    """
    a_vals = lat.asarray(a_vals).ravel()
    b_vals = lat.asarray(b_vals).ravel()
    if not lat.is_unit_interval:
        return np.array([[galois_residuum_oracle(lat.value(a), lat.value(b), grid).raw
                          for b in b_vals] for a in a_vals])
    cands = lat.samples(grid)
    out = np.empty((len(a_vals), len(b_vals)))
    for i, a in enumerate(a_vals):
        t = lat.tensor(a, cands)
        order = np.argsort(t, kind="stable")
        best = np.maximum.accumulate(cands[order])
        k = np.searchsorted(t[order], b_vals + EPS, side="right")
        out[i] = np.where(k > 0, best[np.maximum(k - 1, 0)], lat.bottom)
    return out


# --------------------------------------------------------------------------
# Axiom validation


@dataclass
class AxiomCheck:
    name: str
    passed: bool
    cases: int = 0
    witness: dict | None = None
    kind: str = "equation"

    def to_dict(self):
        return {"name": self.name, "kind": self.kind, "passed": self.passed,
                "cases": self.cases, "witness": self.witness}


@dataclass
class ValidationReport:
    lattice: str
    exhaustive: bool
    checks: list[AxiomCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> AxiomCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {"lattice": self.lattice, "exhaustive": self.exhaustive, "ok": self.ok,
                "checks": [c.to_dict() for c in self.checks]}

    def format(self, failures_only=False) -> str:
        lines = []
        for c in self.checks:
            if failures_only and c.passed:
                continue
            line = f"{'PASS' if c.passed else 'FAIL'}  {c.name}"
            if c.witness:
                line += "  witness: " + ", ".join(f"{k}={v}" for k, v in c.witness.items())
            lines.append(line)
        return "\n".join(lines)


class _Checker:
    def __init__(self, lat: Lattice, report: ValidationReport, operands: dict):
        self.lat = lat
        self.report = report
        self.operands = operands

    def __call__(self, name, holds, kind="equation", uses=("a", "b", "c")):
        ops = {k: self.operands[k] for k in uses}
        shape = np.broadcast_shapes(*(v.shape for v in ops.values()))
        holds = np.broadcast_to(np.asarray(holds, dtype=bool), shape)
        witness = None
        bad = np.argwhere(~holds)
        if len(bad):
            idx = tuple(bad[0])
            witness = {k: self.lat.format_value(np.broadcast_to(v, shape)[idx])
                       for k, v in ops.items()}
        self.report.checks.append(
            AxiomCheck(name, witness is None, int(holds.size), witness, kind))


def validate_lattice(lat: Lattice, grid: int = 101) -> ValidationReport:
    """Check every residuated-lattice axiom and the derived identities.

    Finite lattices are checked exhaustively; unit-interval lattices on a
    uniform grid of ``grid`` points.  Identities over index families are
    checked in their binary form, which is what finite relations consume.
    Failures are returned in the report, never raised.
    """
    finite = not lat.is_unit_interval
    report = ValidationReport(lat.name, exhaustive=finite)

    if isinstance(lat, FiniteLattice):
        missing = lat.missing_entries()
        for what in ("meet", "join", "residuum"):
            pairs = missing.get(what)
            witness = None
            if pairs:
                a, b = pairs[0]
                witness = {"a": lat.names[a], "b": lat.names[b]}
            report.checks.append(AxiomCheck(f"{what}-exists", not pairs, lat.size ** 2,
                                            witness, "axiom"))
        for what, v in (("bottom", lat.bottom), ("top", lat.top)):
            report.checks.append(AxiomCheck(f"{what}-exists", v != _MISSING, lat.size,
                                            None, "axiom"))
        if not lat.complete:
            return report

    pts = lat.samples(grid)
    n = len(pts)
    a = pts.reshape(n, 1, 1)
    b = pts.reshape(1, n, 1)
    c = pts.reshape(1, 1, n)
    check = _Checker(lat, report, {"a": a, "b": b, "c": c})
    L = lat
    top = L.top
    bot = L.bottom

    check("order-reflexive", L.leq(a, a), "axiom", uses=("a",))
    check("order-antisymmetric", ~(L.leq(a, b) & L.leq(b, a)) | L.eq(a, b), "axiom",
          uses=("a", "b"))
    check("order-transitive", ~(L.leq(a, b) & L.leq(b, c)) | L.leq(a, c), "axiom")
    check("bounds", L.leq(bot, a) & L.leq(a, top), "axiom", uses=("a",))
    m = L.meet(a, b)
    check("meet-greatest-lower-bound",
          L.leq(m, a) & L.leq(m, b) & (~(L.leq(c, a) & L.leq(c, b)) | L.leq(c, m)), "axiom")
    j = L.join(a, b)
    check("join-least-upper-bound",
          L.leq(a, j) & L.leq(b, j) & (~(L.leq(a, c) & L.leq(b, c)) | L.leq(j, c)), "axiom")

    ab = L.tensor(a, b)
    check("tensor-commutative", L.eq(ab, L.tensor(b, a)), uses=("a", "b"))
    check("tensor-associative", L.eq(L.tensor(ab, c), L.tensor(a, L.tensor(b, c))))
    check("tensor-unit", L.eq(L.tensor(a, top), a) & L.eq(L.tensor(top, a), a), uses=("a",))
    check("tensor-monotone", ~L.leq(a, b) | L.leq(L.tensor(a, c), L.tensor(b, c)), "axiom")
    check("galois-adjunction", L.leq(ab, c) == L.leq(a, L.residuum(b, c)), "axiom")

    R = L.residuum
    check("exchange", L.eq(R(ab, c), R(a, R(b, c))))
    check("tensor-join-distributive",
          L.eq(L.tensor(a, L.join(b, c)), L.join(ab, L.tensor(a, c))))
    check("residuum-meet-preserving",
          L.eq(R(a, L.meet(b, c)), L.meet(R(a, b), R(a, c))))
    check("residuum-join-antitone",
          L.eq(R(L.join(a, b), c), L.meet(R(a, c), R(b, c))))
    check("tensor-meet-subdistributive",
          L.leq(L.tensor(a, L.meet(b, c)), L.meet(ab, L.tensor(a, c))), "inequality")
    check("residuum-join-subdistributive",
          L.leq(L.join(R(a, b), R(a, c)), R(a, L.join(b, c))), "inequality")
    check("residuum-meet-antecedent",
          L.leq(L.join(R(a, c), R(b, c)), R(L.meet(a, b), c)), "inequality")
    return report
