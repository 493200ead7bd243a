import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bkrel import lattice as lt
from bkrel.errors import LatticeAxiomError, LatticeMismatchError
from bkrel.formats import lattice_from_spec, read_lattice_json

from conftest import ALL, FINITE, UNIT, ids

G = lt.Godel()
L = lt.Lukasiewicz()
P = lt.Product()
N = lt.NilpotentMin()


def v(lat, x):
    return lat.value(x)


# dyadic grid: sums and products are exact in binary floating point
dyadic = st.integers(0, 64).map(lambda k: k / 64)


# --- scalar operation examples -------------------------------------------------

def test_lukasiewicz_tensor_example():
    # max(0, 0.7 + 0.6 - 1)
    assert float(lt.tensor(v(L, 0.7), v(L, 0.6))) == pytest.approx(0.3, abs=1e-9)


def test_godel_tensor_example():
    assert lt.tensor(v(G, 0.7), v(G, 0.6)) == v(G, 0.6)


@pytest.mark.parametrize("lat", ALL, ids=ids(ALL))
def test_tensor_unit(lat):
    for a in lat.samples(11):
        assert lt.tensor(v(lat, a), v(lat, lat.top)) == v(lat, a)


def test_lukasiewicz_residuum_example():
    a, b = v(L, 0.7), v(L, 0.4)
    assert float(lt.residuum(a, b)) == pytest.approx(0.7, abs=1e-9)
    assert float(lt.galois_residuum_oracle(a, b, 1001)) == pytest.approx(0.7, abs=1e-3)


def test_godel_residuum_below():
    assert lt.residuum(v(G, 0.3), v(G, 0.4)) == v(G, 1.0)


@pytest.mark.parametrize("lat", ALL, ids=ids(ALL))
def test_residuum_of_equal_arguments(lat):
    for a in lat.samples(21):
        r = lt.residuum(v(lat, a), v(lat, a))
        assert r == v(lat, lat.top)
        assert lt.leq(lt.tensor(v(lat, a), r), v(lat, a))


def test_product_residuum_at_zero_is_top():
    assert lt.residuum(v(P, 0.0), v(P, 0.0)) == v(P, 1.0)
    assert lt.residuum(v(P, 0.0), v(P, 0.3)) == v(P, 1.0)


def test_product_residuum_closed_form():
    assert float(lt.residuum(v(P, 0.5), v(P, 0.2))) == pytest.approx(0.4, abs=1e-9)


def test_nilmin_residuum_closed_form():
    assert float(lt.residuum(v(N, 0.8), v(N, 0.1))) == pytest.approx(0.2, abs=1e-9)
    assert float(lt.residuum(v(N, 0.3), v(N, 0.1))) == pytest.approx(0.7, abs=1e-9)


def test_nilmin_tensor_left_continuity():
    # a + b == 1 is still annihilated
    assert float(lt.tensor(v(N, 0.4), v(N, 0.6))) == 0.0
    assert float(lt.tensor(v(N, 0.5), v(N, 0.6))) == pytest.approx(0.5)


def test_meet_join_leq_on_chain():
    a, b = v(G, 0.2), v(G, 0.9)
    assert lt.meet(a, b) == a
    assert lt.join(a, b) == b
    assert lt.leq(a, b)
    assert not lt.leq(b, a)


@pytest.mark.parametrize("lat", ALL, ids=ids(ALL))
def test_meet_join_idempotent(lat):
    for a in lat.samples(11):
        x = v(lat, a)
        assert lt.meet(x, x) == x
        assert lt.join(x, x) == x
        assert lt.leq(x, x)


def test_finite_ops_are_table_lookups():
    lat = lt.lukasiewicz_chain(3)
    tables = lat.to_dict()
    for a in range(3):
        for b in range(3):
            assert lt.tensor(v(lat, a), v(lat, b)).raw == tables["tensor"][a][b]
            assert lt.residuum(v(lat, a), v(lat, b)).raw == tables["residuum"][a][b]
            assert lt.meet(v(lat, a), v(lat, b)).raw == min(a, b)
            assert lt.join(v(lat, a), v(lat, b)).raw == max(a, b)


def test_biresiduum_examples():
    assert float(lt.biresiduum(v(L, 0.7), v(L, 0.4))) == pytest.approx(0.7, abs=1e-9)
    assert float(lt.biresiduum(v(G, 0.3), v(G, 0.8))) == pytest.approx(0.3, abs=1e-9)
    for lat in UNIT:
        assert lt.biresiduum(v(lat, 0.37), v(lat, 0.37)) == v(lat, 1.0)


def test_mixed_lattices_rejected():
    with pytest.raises(LatticeMismatchError):
        lt.tensor(v(G, 0.5), v(L, 0.5))
    with pytest.raises(LatticeMismatchError):
        lt.leq(v(G, 0.5), v(lt.boolean(), 1))


def test_truth_value_range_checked():
    with pytest.raises(ValueError):
        v(G, 1.5)
    with pytest.raises(ValueError):
        v(lt.boolean(), 2)


# --- Galois oracle ---------------------------------------------------------------

def test_oracle_boolean_implication():
    B = lt.boolean()
    assert lt.galois_residuum_oracle(v(B, 1), v(B, 0)).raw == 0
    assert lt.galois_residuum_oracle(v(B, 0), v(B, 0)).raw == 1


def test_oracle_product_example():
    got = lt.galois_residuum_oracle(v(P, 0.5), v(P, 0.2), 1001)
    assert float(got) == pytest.approx(0.4, abs=1e-3)


@pytest.mark.parametrize("lat", UNIT, ids=ids(UNIT))
@settings(max_examples=60, deadline=None)
@given(a=st.floats(0, 1), b=st.floats(0, 1))
def test_closed_form_matches_oracle(lat, a, b):
    closed = float(lt.residuum(v(lat, a), v(lat, b)))
    brute = float(lt.galois_residuum_oracle(v(lat, a), v(lat, b), 1001))
    assert abs(closed - brute) <= 1 / 1000 + 1e-9


@pytest.mark.parametrize("lat", FINITE, ids=ids(FINITE))
def test_finite_oracle_is_exact(lat):
    for a in range(lat.size):
        for b in range(lat.size):
            assert lt.galois_residuum_oracle(v(lat, a), v(lat, b)) == lt.residuum(v(lat, a), v(lat, b))


# --- algebraic identities as properties -----------------------------------------

@pytest.mark.parametrize("lat", UNIT, ids=ids(UNIT))
@settings(max_examples=150, deadline=None)
@given(a=dyadic, b=dyadic, c=dyadic)
def test_identities_on_dyadic_values(lat, a, b, c):
    a, b, c = v(lat, a), v(lat, b), v(lat, c)
    T, R = lt.tensor, lt.residuum
    assert lt.leq(T(a, b), c) == lt.leq(a, R(b, c))
    assert R(T(a, b), c) == R(a, R(b, c))
    assert T(a, lt.join(b, c)) == lt.join(T(a, b), T(a, c))
    assert R(a, lt.meet(b, c)) == lt.meet(R(a, b), R(a, c))
    assert R(lt.join(a, b), c) == lt.meet(R(a, c), R(b, c))
    assert lt.leq(T(a, lt.meet(b, c)), lt.meet(T(a, b), T(a, c)))
    assert lt.leq(lt.join(R(a, b), R(a, c)), R(a, lt.join(b, c)))
    assert lt.leq(lt.join(R(a, c), R(b, c)), R(lt.meet(a, b), c))


# --- validation --------------------------------------------------------------------

@pytest.mark.parametrize("lat", ALL, ids=ids(ALL))
def test_builtins_validate(lat):
    report = lt.validate_lattice(lat)
    assert report.ok, report.format(failures_only=True)
    assert report.exhaustive == (lat in FINITE)


def test_boolean_report_lists_every_identity():
    report = lt.validate_lattice(lt.boolean())
    names = {c.name for c in report.checks}
    assert {"galois-adjunction", "exchange", "tensor-associative",
            "residuum-meet-antecedent"} <= names


def _nonassociative_tables():
    # 4-chain, 1*1 = 1 but 1*2 = 0, so (1*2)*2 = 0 while 1*(2*2) = 1
    names = ["0", "a", "b", "1"]
    leq = [[i <= j for j in range(4)] for i in range(4)]
    tensor = [
        [0, 0, 0, 0],
        [0, 1, 0, 1],
        [0, 0, 1, 2],
        [0, 1, 2, 3],
    ]
    return names, leq, tensor


def test_nonassociative_table_fails_with_witness():
    names, leq, tensor = _nonassociative_tables()
    lat = lt.FiniteLattice(names, leq, tensor, bottom=0, top=3, check=False)
    report = lt.validate_lattice(lat)
    assert not report.ok
    assoc = report["tensor-associative"]
    assert not assoc.passed
    w = assoc.witness
    a, b, c = (names.index(w[k]) for k in "abc")
    assert lat.tensor(lat.tensor(a, b), c) != lat.tensor(a, lat.tensor(b, c))


def test_checked_construction_raises_with_report():
    names, leq, tensor = _nonassociative_tables()
    with pytest.raises(LatticeAxiomError) as exc:
        lt.FiniteLattice(names, leq, tensor, bottom=0, top=3)
    assert exc.value.report is not None
    assert not exc.value.report.ok


def test_bad_given_residuum_fails_adjunction():
    lat = lt.boolean()
    d = lat.to_dict()
    d["residuum"] = [[1, 1], [1, 1]]
    broken = lt.FiniteLattice.from_dict(d, check=False)
    report = lt.validate_lattice(broken)
    assert not report["galois-adjunction"].passed


def test_missing_meet_is_reported():
    # two incomparable elements without a bottom: no meet for (x, y)
    names = ["x", "y", "1"]
    leq = [[True, False, True], [False, True, True], [False, False, True]]
    tensor = [[0, 0, 0], [0, 1, 1], [0, 1, 2]]
    lat = lt.FiniteLattice(names, leq, tensor, top=2, check=False)
    report = lt.validate_lattice(lat)
    assert not report["meet-exists"].passed
    assert report["meet-exists"].witness == {"a": "x", "b": "y"}


def test_derived_residuum_matches_closed_form():
    explicit = lt.lukasiewicz_chain(5)
    d = explicit.to_dict()
    del d["residuum"]
    derived = lt.FiniteLattice.from_dict(d)
    assert derived.residuum_derived
    assert np.array_equal(derived.residuum(*np.indices((5, 5))),
                          explicit.residuum(*np.indices((5, 5))))


def test_non_chain_lattice():
    # the four-element Boolean algebra with tensor = meet
    names = ["0", "p", "q", "1"]
    below = {0: {0}, 1: {0, 1}, 2: {0, 2}, 3: {0, 1, 2, 3}}
    leq = [[i in below[j] for j in range(4)] for i in range(4)]
    meet = [[max(below[i] & below[j]) for j in range(4)] for i in range(4)]
    lat = lt.FiniteLattice(names, leq, meet, bottom=0, top=3)
    assert lt.validate_lattice(lat).ok
    # residuum of a Boolean algebra is classical implication (not p) or q
    assert lat.residuum(1, 2) == 2
    assert lat.join(1, 2) == 3


def test_lattice_json_roundtrip(tmp_path):
    path = tmp_path / "l3.json"
    d = lt.lukasiewicz_chain(3).to_dict()
    del d["residuum"]
    path.write_text(json.dumps(d))
    loaded = read_lattice_json(path)
    assert loaded == lt.lukasiewicz_chain(3)
    assert lattice_from_spec(f"table:{path}") == loaded


def test_lattice_spec_names():
    assert lattice_from_spec("godel") == G
    assert lattice_from_spec("nilmin") == N
    with pytest.raises(ValueError):
        lattice_from_spec("frank")


@pytest.mark.parametrize("lat", ALL, ids=ids(ALL))
def test_grid_oracle_matches_scalar_oracle(lat):
    vals = lat.samples(7)
    table = lt.galois_residuum_grid(lat, vals, vals, grid=101)
    for i, a in enumerate(vals):
        for j, b in enumerate(vals):
            assert table[i, j] == lt.galois_residuum_oracle(v(lat, a), v(lat, b), 101).raw
