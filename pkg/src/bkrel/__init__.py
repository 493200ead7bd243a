"""bkrel: fuzzy relational calculus with BK-products over residuated lattices."""

__version__ = "0.1.0"

from .errors import (
    BKRelError,
    ExprSyntaxError,
    LatticeAxiomError,
    LatticeMismatchError,
    NonAssociativeChainError,
    NotCrispError,
    UnboundNameError,
    UnsupportedLatticeError,
    WiringError,
)
from .lattice import (
    FiniteLattice,
    Godel,
    Lattice,
    Lukasiewicz,
    NilpotentMin,
    Product,
    TruthValue,
    boolean,
    builtin_lattice,
    godel_chain,
    lukasiewicz_chain,
    validate_lattice,
)
from .morphism import MorphismSquare, amphimorphism, solve
from .relation import (
    Connective,
    DomainSig,
    Relation,
    circle,
    converse,
    included_in,
    mean_product,
    square,
    sub,
    sup,
)
