"""Generalized morphisms between relations R: A -> B and S: C -> D.

The mappings are relations F: A -> C and G: B -> D.  The square is

* forward compatible when  F' o R o G  <=  S,
* backward compatible when F o S o G'  <=  R   (a.k.a. proteromorphism),
* both-ways compatible (an amphimorphism) when both hold.

Each inequality can be solved for any one of the four relations once the
other three are fixed.  When the unknown sits on the smaller side the
solution set is a down-set with a greatest element (an upper bound built
from BK-products); when it sits on the larger side it is an up-set whose
least element is a circle composite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LatticeMismatchError, NotCrispError, WiringError
from .relation import (
    Relation,
    circle,
    circle_array,
    converse,
    converse_array,
    equals,
    included_array,
    included_in,
    is_covering,
    is_crisp,
    is_univalent,
    sub_array,
    sup_array,
)

# which domain each end of each relation lives on
_ENDS = {"R": ("A", "B"), "S": ("C", "D"), "F": ("A", "C"), "G": ("B", "D")}


def check_wiring(**rels: Relation | None) -> None:
    """Raise :class:`WiringError` unless the given relations fit the square."""
    given = {k: v for k, v in rels.items() if v is not None}
    unknown = set(given) - set(_ENDS)
    if unknown:
        raise TypeError(f"unexpected relation roles: {sorted(unknown)}")
    seen: dict[str, tuple[str, object]] = {}
    lattice = None
    for role, rel in given.items():
        if lattice is None:
            lattice = (role, rel.lattice)
        elif rel.lattice != lattice[1]:
            raise LatticeMismatchError(
                f"{role} is over {rel.lattice.name!r} but {lattice[0]} is over "
                f"{lattice[1].name!r}")
        for end, dom in zip(_ENDS[role], (rel.source, rel.target)):
            if end in seen and not seen[end][1].matches(dom):
                other, odom = seen[end]
                raise WiringError(
                    f"domain {end} disagrees: {other} gives {odom} but {role} gives {dom}")
            seen.setdefault(end, (role, dom))


@dataclass(frozen=True)
class MorphismSquare:
    R: Relation
    S: Relation
    F: Relation
    G: Relation

    def __post_init__(self):
        check_wiring(R=self.R, S=self.S, F=self.F, G=self.G)

    @property
    def lattice(self):
        return self.R.lattice


@dataclass(frozen=True)
class Violation:
    """A cell where ``lhs <= rhs`` fails."""

    cell: tuple[int, int]
    row: str
    col: str
    lhs: str
    rhs: str

    def to_dict(self):
        return {"cell": list(self.cell), "row": self.row, "col": self.col,
                "lhs": self.lhs, "rhs": self.rhs}


@dataclass(frozen=True)
class CompatReport:
    forward: bool
    backward: bool
    forward_violation: Violation | None = None
    backward_violation: Violation | None = None

    @property
    def bothways(self) -> bool:
        return self.forward and self.backward

    def to_dict(self):
        return {
            "forward": self.forward,
            "backward": self.backward,
            "bothways": self.bothways,
            "forward_violation": self.forward_violation and self.forward_violation.to_dict(),
            "backward_violation": self.backward_violation and self.backward_violation.to_dict(),
        }


def forward_composite(m: MorphismSquare) -> Relation:
    """F' o R o G, a relation C -> D."""
    return circle(circle(converse(m.F), m.R), m.G)


def backward_composite(m: MorphismSquare) -> Relation:
    """F o S o G', a relation A -> B."""
    return circle(circle(m.F, m.S), converse(m.G))


def worst_violation(lhs: Relation, rhs: Relation) -> Violation | None:
    """The cell where ``lhs`` exceeds ``rhs`` the most, or None if ``lhs <= rhs``.

    Table lattices have no distance, so there the first violating cell in
    row-major order is returned.
    """
    lat = lhs.lattice
    bad = ~lat.leq(lhs.matrix, rhs.matrix)
    if not bad.any():
        return None
    if lat.is_unit_interval:
        gap = np.where(bad, lhs.matrix - rhs.matrix, -np.inf)
        i, j = np.unravel_index(int(np.argmax(gap)), gap.shape)
    else:
        i, j = (int(v) for v in np.argwhere(bad)[0])
    return Violation((int(i), int(j)), lhs.source.labels[i], lhs.target.labels[j],
                     lat.format_value(lhs.matrix[i, j]), lat.format_value(rhs.matrix[i, j]))


def forward_compatible(m: MorphismSquare) -> bool:
    return included_in(forward_composite(m), m.S)


def backward_compatible(m: MorphismSquare) -> bool:
    return included_in(backward_composite(m), m.R)


# generalized proteromorphism is backward compatibility under another name
proteromorphism = backward_compatible


def amphimorphism(m: MorphismSquare) -> CompatReport:
    fv = worst_violation(forward_composite(m), m.S)
    bv = worst_violation(backward_composite(m), m.R)
    return CompatReport(fv is None, bv is None, fv, bv)


# --------------------------------------------------------------------------
# Solutions
#
# Kernels take raw matrices with optional leading batch dimensions.

def _fwd_lhs(lat, R, F, G):
    return circle_array(lat, circle_array(lat, converse_array(F), R), G)


def _bwd_lhs(lat, S, F, G):
    return circle_array(lat, circle_array(lat, F, S), converse_array(G))


def forward_array(lat, R, S, F, G):
    """Batched forward-compatibility test."""
    return included_array(lat, _fwd_lhs(lat, R, F, G), S)


def backward_array(lat, R, S, F, G):
    """Batched backward-compatibility test."""
    return included_array(lat, _bwd_lhs(lat, S, F, G), R)


def _R_upper(lat, S, F, G):
    return sub_array(lat, F, sup_array(lat, S, converse_array(G)))


def _S_upper(lat, R, F, G):
    return sub_array(lat, converse_array(F), sup_array(lat, R, G))


def _F_forward(lat, R, S, G):
    return sub_array(lat, R, sub_array(lat, G, converse_array(S)))


def _G_forward(lat, R, S, F):
    return sub_array(lat, converse_array(R), sub_array(lat, F, S))


def _F_backward(lat, R, S, G):
    return sup_array(lat, sup_array(lat, R, G), converse_array(S))


def _G_backward(lat, R, S, F):
    return sup_array(lat, sup_array(lat, converse_array(R), F), S)


BOUND_KERNELS = {
    ("R", "forward"): (_R_upper, "upper"),
    ("R", "backward"): (_bwd_lhs, "lower"),
    ("S", "forward"): (_fwd_lhs, "lower"),
    ("S", "backward"): (_S_upper, "upper"),
    ("F", "forward"): (_F_forward, "upper"),
    ("F", "backward"): (_F_backward, "upper"),
    ("G", "forward"): (_G_forward, "upper"),
    ("G", "backward"): (_G_backward, "upper"),
}
"""(unknown, direction) -> (kernel over the other three in R, S, F, G order, bound kind)."""

COMPAT_KERNELS = {"forward": forward_array, "backward": backward_array}


def _solve(which: str, direction: str, known: dict) -> Relation:
    check_wiring(**known)
    kernel, _ = BOUND_KERNELS[(which, direction)]
    args = [known[r].matrix for r in "RSFG" if r != which]
    lat = next(iter(known.values())).lattice
    src, tgt = _ENDS[which]
    doms = {}
    for role, rel in known.items():
        a, b = _ENDS[role]
        doms.setdefault(a, rel.source)
        doms.setdefault(b, rel.target)
    return Relation(lat, kernel(lat, *args), doms[src], doms[tgt], which)


def solve_R_upper(S: Relation, F: Relation, G: Relation) -> Relation:
    """Greatest R with F' o R o G <= S, namely F <| (S |> G')."""
    return _solve("R", "forward", dict(S=S, F=F, G=G))


def solve_R_lower(S: Relation, F: Relation, G: Relation) -> Relation:
    """Least R with F o S o G' <= R."""
    return _solve("R", "backward", dict(S=S, F=F, G=G))


def solve_S_upper(R: Relation, F: Relation, G: Relation) -> Relation:
    """Greatest S with F o S o G' <= R, namely F' <| (R |> G)."""
    return _solve("S", "backward", dict(R=R, F=F, G=G))


def solve_S_lower(R: Relation, F: Relation, G: Relation) -> Relation:
    """Least S with F' o R o G <= S."""
    return _solve("S", "forward", dict(R=R, F=F, G=G))


def solve_F_forward(R: Relation, S: Relation, G: Relation) -> Relation:
    """Greatest F making the square forward compatible: R <| (G <| S')."""
    return _solve("F", "forward", dict(R=R, S=S, G=G))


def solve_G_forward(R: Relation, S: Relation, F: Relation) -> Relation:
    """Greatest G making the square forward compatible: R' <| (F <| S)."""
    return _solve("G", "forward", dict(R=R, S=S, F=F))


def solve_F_backward(R: Relation, S: Relation, G: Relation) -> Relation:
    """Greatest F making the square backward compatible: (R |> G) |> S'."""
    return _solve("F", "backward", dict(R=R, S=S, G=G))


def solve_G_backward(R: Relation, S: Relation, F: Relation) -> Relation:
    """Greatest G making the square backward compatible: (R' |> F) |> S."""
    return _solve("G", "backward", dict(R=R, S=S, F=F))


@dataclass(frozen=True)
class Bound:
    """Solution of one compatibility inequality for one unknown.

    ``kind == "upper"``: the unknown X satisfies the inequality iff X <= relation.
    ``kind == "lower"``: iff relation <= X.
    """

    relation: Relation
    kind: str


def solve(which: str, direction: str, **known: Relation) -> Bound:
    """Solve the ``direction`` inequality for the relation named ``which``.

    ``known`` must hold the other three of R, S, F, G.
    """
    if (which, direction) not in BOUND_KERNELS:
        raise ValueError(f"no solver for {which!r} in direction {direction!r}")
    needed = [r for r in "RSFG" if r != which]
    missing = [r for r in needed if known.get(r) is None]
    if missing:
        raise ValueError(f"solving for {which} needs {', '.join(missing)}")
    kind = BOUND_KERNELS[(which, direction)][1]
    return Bound(_solve(which, direction, {r: known[r] for r in needed}), kind)


def is_compatible(m: MorphismSquare, direction: str) -> bool:
    if direction == "forward":
        return forward_compatible(m)
    if direction == "backward":
        return backward_compatible(m)
    if direction == "bothways":
        return forward_compatible(m) and backward_compatible(m)
    raise ValueError(f"unknown direction {direction!r}")


# --------------------------------------------------------------------------
# Crisp homomorphisms


def _require_crisp(m: MorphismSquare):
    for role in "RSFG":
        if not is_crisp(getattr(m, role)):
            raise NotCrispError(f"{role} is not crisp; homomorphisms are crisp notions")


def is_homomorphism(m: MorphismSquare) -> bool:
    """Both composite equalities hold and F, G are total functions."""
    _require_crisp(m)
    return (all(is_univalent(r) and is_covering(r) for r in (m.F, m.G))
            and equals(forward_composite(m), m.S)
            and equals(backward_composite(m), m.R))


def is_partial_homomorphism(m: MorphismSquare) -> bool:
    """The square commutes (R o G = F o S) and F, G are partial functions."""
    _require_crisp(m)
    return (is_univalent(m.F) and is_univalent(m.G)
            and equals(circle(m.R, m.G), circle(m.F, m.S)))
