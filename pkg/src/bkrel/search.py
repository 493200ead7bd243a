"""Exhaustive small-instance oracle and counterexample hunter.

Every check enumerates tuples of relations over tiny domains whose entries
range over a finite value set (a finite carrier, or a grid such as
{0, 1/2, 1} on the unit interval).  Tuples are visited in lexicographic
order of their matrices (first relation most significant, cells row-major),
in vectorised chunks, so the first counterexample found is the
lexicographically smallest one and every run is reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .lattice import Lattice
from .morphism import (
    BOUND_KERNELS,
    COMPAT_KERNELS,
    MorphismSquare,
    is_compatible,
    solve,
)
from .relation import (
    DomainSig,
    Relation,
    circle,
    circle_array,
    converse,
    converse_array,
    equal_array,
    equals,
    included_array,
    included_in,
    sub,
    sub_array,
    sup,
    sup_array,
)

DEFAULT_BUDGET = 10**7
CHUNK = 1 << 15
MAX_DOMAIN = 3
DOMAINS = "ABCD"


class Verdict(str, Enum):
    EXHAUSTIVE = "verified-exhaustive"
    SAMPLED = "verified-sampled"
    COUNTEREXAMPLE = "counterexample"


@dataclass
class SearchSpace:
    """Where to search: a lattice, domain sizes |A|..|D| and a value set."""

    lattice: Lattice
    sizes: tuple[int, ...] = (2, 2, 2, 2)
    values: np.ndarray | None = None
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        self.sizes = tuple(int(n) for n in self.sizes)
        if not 1 <= len(self.sizes) <= 4:
            raise ValueError("give between one and four domain sizes")
        if any(not 1 <= n <= MAX_DOMAIN for n in self.sizes):
            raise ValueError(f"domain sizes must be between 1 and {MAX_DOMAIN}")
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        if self.values is None:
            self.values = self.lattice.samples(3)
        self.values = self.lattice.asarray(self.values).ravel()
        if len(self.values) == 0:
            raise ValueError("value set is empty")

    @classmethod
    def grid(cls, lattice: Lattice, points: int = 3, sizes=(2, 2, 2, 2),
             budget: int = DEFAULT_BUDGET) -> "SearchSpace":
        """Uniform ``points``-grid on [0, 1], or the whole carrier of a table lattice."""
        return cls(lattice, sizes, lattice.samples(points), budget)

    def size(self, domain: str) -> int:
        i = DOMAINS.index(domain)
        if i >= len(self.sizes):
            raise ValueError(f"search space has no size for domain {domain}")
        return self.sizes[i]

    def domain(self, name: str) -> DomainSig:
        return DomainSig.range(name, self.size(name))

    def describe(self) -> dict:
        return {
            "sizes": dict(zip(DOMAINS, self.sizes)),
            "values": [self.lattice.format_value(v) for v in self.values],
            "raw_values": self.values.tolist(),
            "budget": self.budget,
        }


@dataclass
class SearchOutcome:
    property: str
    lattice: str
    space: dict
    verdict: Verdict
    checked: int
    total: int
    witness: dict | None = None
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict is not Verdict.COUNTEREXAMPLE

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "lattice": self.lattice,
            "space": self.space,
            "verdict": self.verdict.value,
            "checked": self.checked,
            "total": self.total,
            "witness": self.witness,
            "stats": self.stats,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


# --------------------------------------------------------------------------
# Enumeration engine


def _digits(idx: np.ndarray, base: int, ndigits: int) -> np.ndarray:
    """Base-``base`` digits of ``idx``, most significant first."""
    out = np.empty((len(idx), ndigits), dtype=np.intp)
    rest = idx.copy()
    for k in range(ndigits - 1, -1, -1):
        rest, out[:, k] = np.divmod(rest, base)
    return out


def _matrix_payload(lat: Lattice, mat) -> dict:
    mat = np.asarray(mat)
    return {"raw": mat.tolist(),
            "display": [[lat.format_value(v) for v in row] for row in mat]}


def _enumerate(space: SearchSpace, prop: str, roles: list[tuple[str, tuple[int, int]]],
               evaluate: Callable, group: int = 1) -> SearchOutcome:
    """Run ``evaluate`` over all tuples of relations with the given shapes.

    ``evaluate(*batches)`` returns ``(ok, details)`` where ``ok`` is a boolean
    array over the batch and ``details(i)`` describes a failing instance.
    ``group`` keeps chunks aligned to blocks of consecutive instances that
    ``evaluate`` needs to see together.
    """
    lat = space.lattice
    vals = space.values
    nv = len(vals)
    cells = [r * c for _, (r, c) in roles]
    ncells = sum(cells)
    total = nv ** ncells
    limit = min(total, space.budget)
    if group > 1:
        limit = max(group, limit // group * group)
    step = max(group, CHUNK // group * group)

    checked = 0
    for start in range(0, limit, step):
        stop = min(start + step, limit)
        digits = _digits(np.arange(start, stop, dtype=np.int64), nv, ncells)
        mats = []
        offset = 0
        for (_, shape), n in zip(roles, cells):
            mats.append(vals[digits[:, offset:offset + n]].reshape(-1, *shape))
            offset += n
        ok, details = evaluate(*mats)
        if not np.all(ok):
            i = int(np.argmin(ok))
            witness = {
                "index": start + i,
                "relations": {name: _matrix_payload(lat, m[i])
                              for (name, _), m in zip(roles, mats)},
            }
            witness.update(details(i))
            return SearchOutcome(prop, lat.name, space.describe(), Verdict.COUNTEREXAMPLE,
                                 start + i + 1, total, witness)
        checked = stop
    verdict = Verdict.EXHAUSTIVE if checked == total else Verdict.SAMPLED
    return SearchOutcome(prop, lat.name, space.describe(), verdict, checked, total)


def _first_cell(bad: np.ndarray) -> tuple[int, int]:
    i, k = np.argwhere(bad)[0]
    return int(i), int(k)


# --------------------------------------------------------------------------
# Properties


def check_bootstrap(space: SearchSpace) -> SearchOutcome:
    """T o U <= V  iff  T <= V |> U'  iff  U <= T' <| V, over T: A->B, U: B->C, V: A->C."""
    lat = space.lattice
    a, b, c = space.size("A"), space.size("B"), space.size("C")

    def evaluate(T, U, V):
        c1 = included_array(lat, circle_array(lat, T, U), V)
        c2 = included_array(lat, T, sup_array(lat, V, converse_array(U)))
        c3 = included_array(lat, U, sub_array(lat, converse_array(T), V))
        ok = (c1 == c2) & (c2 == c3)
        return ok, lambda i: {"detail": {"circle_le_V": bool(c1[i]),
                                         "T_le_sup": bool(c2[i]),
                                         "U_le_sub": bool(c3[i])}}

    return _enumerate(space, "bootstrap",
                      [("T", (a, b)), ("U", (b, c)), ("V", (a, c))], evaluate)


def _assoc_sides(law: int):
    """Array-level (lhs, rhs) of each mixed pseudo-associativity law."""
    if law == 1:
        return (lambda L, Q, R, S: sub_array(L, Q, sup_array(L, R, S)),
                lambda L, Q, R, S: sup_array(L, sub_array(L, Q, R), S))
    if law == 2:
        return (lambda L, Q, R, S: sub_array(L, Q, sub_array(L, R, S)),
                lambda L, Q, R, S: sub_array(L, circle_array(L, Q, R), S))
    if law == 3:
        return (lambda L, Q, R, S: sup_array(L, Q, sup_array(L, R, S)),
                lambda L, Q, R, S: sup_array(L, Q, circle_array(L, R, S)))
    raise ValueError(f"pseudo-associativity law must be 1, 2 or 3, not {law!r}")


ASSOC_LAWS = {
    1: "Q <| (R |> S) == (Q <| R) |> S",
    2: "Q <| (R <| S) == (Q o R) <| S",
    3: "Q |> (R |> S) == Q |> (R o S)",
}


def check_pseudo_assoc(space: SearchSpace, law: int) -> SearchOutcome:
    """Search for Q: A->B, R: B->C, S: C->D violating one associativity law."""
    lhs_fn, rhs_fn = _assoc_sides(law)
    lat = space.lattice
    a, b, c, d = (space.size(x) for x in DOMAINS)

    def evaluate(Q, R, S):
        lhs = lhs_fn(lat, Q, R, S)
        rhs = rhs_fn(lat, Q, R, S)
        ok = equal_array(lat, lhs, rhs)

        def details(i):
            cell = _first_cell(~lat.eq(lhs[i], rhs[i]))
            return {"law": ASSOC_LAWS[law], "cell": list(cell),
                    "lhs": lat.format_value(lhs[i][cell]),
                    "rhs": lat.format_value(rhs[i][cell])}

        return ok, details

    out = _enumerate(space, f"assoc{law}",
                     [("Q", (a, b)), ("R", (b, c)), ("S", (c, d))], evaluate)
    out.stats["law"] = ASSOC_LAWS[law]
    return out


_SHAPES = {"R": "AB", "S": "CD", "F": "AC", "G": "BD"}


def check_solver_maximality(space: SearchSpace, which: str, direction: str) -> SearchOutcome:
    """Compare a solver's bound with the enumerated extremum of all solutions.

    For each fixed triple of known relations every candidate X is tried.  Two
    things must hold: X solves the inequality exactly when it lies on the
    correct side of the bound, and the join (meet, for lower bounds) of all
    solutions equals the bound whenever the bound lies inside the value set.
    """
    if (which, direction) not in BOUND_KERNELS:
        raise ValueError(f"no solver for {which!r} in direction {direction!r}")
    lat = space.lattice
    kernel, kind = BOUND_KERNELS[(which, direction)]
    compat = COMPAT_KERNELS[direction]
    known = [r for r in "RSFG" if r != which]
    shape = {r: tuple(space.size(x) for x in _SHAPES[r]) for r in "RSFG"}
    roles = [(r, shape[r]) for r in known] + [(which, shape[which])]
    vals = space.values
    group = len(vals) ** (shape[which][0] * shape[which][1])
    off_grid = 0

    def evaluate(*mats):
        nonlocal off_grid
        rels = dict(zip(known + [which], mats))
        X = rels[which]
        bound = kernel(lat, *(rels[r] for r in known))
        solves = compat(lat, *(rels[r] for r in "RSFG"))
        if kind == "upper":
            side = included_array(lat, X, bound)
        else:
            side = included_array(lat, bound, X)
        misclassified = solves != side

        # extremum of all solutions, per block of one fixed triple
        ng = len(X) // group
        Xg = X.reshape(ng, group, *X.shape[1:])
        sg = solves.reshape(ng, group)[..., None, None]
        if kind == "upper":
            masked = np.where(sg, Xg, lat.bottom)
            extremum = lat.join_reduce(masked, 1)
        else:
            masked = np.where(sg, Xg, lat.top)
            extremum = lat.meet_reduce(masked, 1)
        bound_g = bound.reshape(ng, group, *X.shape[1:])[:, 0]
        on_grid = np.all(np.any(lat.eq(bound_g[..., None], vals), axis=-1), axis=(-2, -1))
        off_grid += int(np.sum(~on_grid))
        mismatch = on_grid & ~equal_array(lat, extremum, bound_g)
        ok = ~misclassified & ~np.repeat(mismatch, group)

        def details(i):
            g = i // group
            out = {"which": which, "direction": direction, "bound_kind": kind,
                   "bound": _matrix_payload(lat, bound[i])}
            if misclassified[i]:
                out["failure"] = "misclassified"
                out["solves"] = bool(solves[i])
            else:
                out["failure"] = "extremum-mismatch"
                out["extremum"] = _matrix_payload(lat, extremum[g])
            return out

        return ok, details

    out = _enumerate(space, f"maximality:{which}:{direction}", roles, evaluate, group)
    out.stats.update({"bound_kind": kind, "triples_with_off_grid_bound": off_grid,
                      "candidates_per_triple": group})
    return out


SOLVER_CASES = [
    ("R", "forward"), ("R", "backward"),
    ("S", "forward"), ("S", "backward"),
    ("F", "forward"), ("F", "backward"),
    ("G", "forward"), ("G", "backward"),
]


# --------------------------------------------------------------------------
# Witness replay through the public relation API


def _rel(lat, payload, src: DomainSig, tgt: DomainSig, name: str) -> Relation:
    return Relation(lat, payload["raw"], src, tgt, name)


def replay(outcome: SearchOutcome, lattice: Lattice) -> bool:
    """Re-check a counterexample with the public operations.

    Returns True when the recorded violation reproduces.
    """
    w = outcome.witness
    if w is None:
        raise ValueError("outcome has no witness to replay")
    sizes = outcome.space["sizes"]
    dom = {k: DomainSig.range(k, n) for k, n in sizes.items()}
    rels = w["relations"]
    prop = outcome.property

    if prop == "bootstrap":
        T = _rel(lattice, rels["T"], dom["A"], dom["B"], "T")
        U = _rel(lattice, rels["U"], dom["B"], dom["C"], "U")
        V = _rel(lattice, rels["V"], dom["A"], dom["C"], "V")
        c1 = included_in(circle(T, U), V)
        c2 = included_in(T, sup(V, converse(U)))
        c3 = included_in(U, sub(converse(T), V))
        return not (c1 == c2 == c3)

    if prop.startswith("assoc"):
        Q = _rel(lattice, rels["Q"], dom["A"], dom["B"], "Q")
        R = _rel(lattice, rels["R"], dom["B"], dom["C"], "R")
        S = _rel(lattice, rels["S"], dom["C"], dom["D"], "S")
        law = int(prop[len("assoc"):])
        if law == 1:
            lhs, rhs = sub(Q, sup(R, S)), sup(sub(Q, R), S)
        elif law == 2:
            lhs, rhs = sub(Q, sub(R, S)), sub(circle(Q, R), S)
        else:
            lhs, rhs = sup(Q, sup(R, S)), sup(Q, circle(R, S))
        return not equals(lhs, rhs)

    if prop.startswith("maximality"):
        which, direction = w["which"], w["direction"]
        rel = {r: _rel(lattice, rels[r], dom[_SHAPES[r][0]], dom[_SHAPES[r][1]], r)
               for r in "RSFG"}
        bound = solve(which, direction, **{r: rel[r] for r in "RSFG" if r != which})
        X = rel[which]

        def solves(x):
            return is_compatible(MorphismSquare(**{**rel, which: x}), direction)

        def on_side(x):
            if bound.kind == "upper":
                return included_in(x, bound.relation)
            return included_in(bound.relation, x)

        if w["failure"] == "misclassified":
            return solves(X) != on_side(X)
        vals = lattice.asarray(outcome.space["raw_values"])
        src, tgt = X.source, X.target
        extremum = None
        for digits in np.ndindex(*([len(vals)] * (len(src) * len(tgt)))):
            cand = Relation(lattice, vals[list(digits)].reshape(len(src), len(tgt)),
                            src, tgt, which)
            if not solves(cand):
                continue
            if extremum is None:
                extremum = cand.matrix
            elif bound.kind == "upper":
                extremum = lattice.join(extremum, cand.matrix)
            else:
                extremum = lattice.meet(extremum, cand.matrix)
        return not equals(Relation(lattice, extremum, src, tgt, which), bound.relation)

    raise ValueError(f"cannot replay property {prop!r}")


# --------------------------------------------------------------------------
# Convenience


def run_property(prop: str, space: SearchSpace, which: str | None = None,
                 direction: str | None = None) -> SearchOutcome:
    """Dispatch by the CLI's property names."""
    if prop == "bootstrap":
        return check_bootstrap(space)
    if prop in ("assoc1", "assoc2", "assoc3"):
        return check_pseudo_assoc(space, int(prop[-1]))
    if prop == "maximality":
        if which is None or direction is None:
            raise ValueError("maximality needs a solver (R, S, F or G) and a direction")
        return check_solver_maximality(space, which, direction)
    raise ValueError(f"unknown property {prop!r}")

