import math

import pytest

import liesym


def test_catalog_lists_every_entry():
    names = liesym.catalog_names()
    assert "riccati" in names and "painleve_ince" in names
    assert len(names) == 10


@pytest.mark.parametrize("name", ["riccati", "quaternionic", "dbh", "kummer_schwarz", "sl2_generic"])
def test_sl2_realizations(name):
    assert liesym.structure_constants(name) == liesym.SL2


def test_cayley_klein_independent_of_iota():
    for iota2 in ("-1", "0", "1"):
        assert liesym.structure_constants("cayley_klein", {"iota2": iota2}) == liesym.SL2


def test_painleve_ince_algebra():
    info = liesym.check_algebra("painleve_ince")
    assert info == {"r": 8, "jacobi": "0", "center": 0, "matches_expected": True}


def test_riccati_symmetry_system_text():
    rhs = liesym.symmetry_system("riccati", {"eta": "t"})
    assert rhs[0] == "0"
    assert rhs[1] == "-t*f2 + f0"


def test_dbh_families_exact():
    res = liesym.family_residuals("dbh")
    assert set(res) == {"self", "b0_zero", "b0_const", "b0_linear"}
    assert all(exact for _, exact in res.values())


def test_integrate_linear_growth():
    # dx/dt = 1 + x^2 from 0 is tan(t)
    t, y, err = liesym.integrate("riccati", {"eta": "1"}, [0.0], 0.0, 1.0, 1e-3)
    assert abs(y[-1][0] - math.tan(1.0)) < 1e-9
    assert len(t) == len(y) == len(err) == 1001


def test_partial_riccati_curvature():
    assert liesym.curvature("partial_riccati") == (0.0, True)
    value, exact = liesym.curvature("partial_riccati", {"perturb": "1/2"})
    assert not exact and value > 0.1


def test_errors_carry_kind():
    with pytest.raises(liesym.LiesymError, match="UnknownName"):
        liesym.structure_constants("nope")
    with pytest.raises(liesym.LiesymError, match="BadParams"):
        liesym.structure_constants("cayley_klein", {"iota2": "2"})


def test_cli_exit_codes():
    rc, out, _ = liesym.run_cli(["check-algebra", "--catalog", "riccati"])
    assert rc == 0 and out.startswith("closed, r=3, jacobi=0, center=0")
    rc, _, _ = liesym.run_cli(["symmetrize", "--catalog", "riccati", "--step", "0"])
    assert rc == 64
    rc, _, _ = liesym.run_cli(["pde", "--catalog", "partial_riccati", "--param", "perturb=1/2"])
    assert rc == 1
