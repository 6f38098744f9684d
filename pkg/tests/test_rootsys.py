import pytest

from dedarr import rootsys
from dedarr.errors import UnknownName


def test_builtin_metadata():
    for name, rank, n, h in [("H2", 2, 5, 5), ("H3", 3, 15, 10),
                             ("H4", 4, 60, 30)]:
        data = rootsys.builtin(name)
        assert data.rank == rank
        assert data.n_positive == n
        assert data.coxeter_number == h
        assert data.arrangement.ell == rank
        assert data.arrangement.n == n


def test_builtin_unknown():
    with pytest.raises(UnknownName):
        rootsys.builtin("H5")


def test_h2_matrix():
    A = rootsys.builtin("H2").arrangement
    assert A.columns == (
        ((1, 0), (0, 0)),
        ((0, 0), (1, 0)),
        ((0, 1), (1, 0)),
        ((1, 0), (0, 1)),
        ((0, 1), (0, 1)),
    )


def test_h3_h4_columns():
    h3 = rootsys.builtin("H3").arrangement
    assert h3.columns[0] == ((1, 0), (0, 0), (0, 0))
    assert h3.columns[-1] == ((1, 1), (0, 2), (0, 1))
    h4 = rootsys.builtin("H4").arrangement
    # final column as printed: the highest root 3t+2, 4t+2, 3t+1, 2t
    assert h4.columns[-1] == ((2, 3), (2, 4), (1, 3), (0, 2))


def test_transcription_matches_reflection_closure():
    for name in ("H2", "H3", "H4"):
        assert rootsys.verify_transcription(name)


def test_positive_root_counts():
    assert len(rootsys.generated_positive_roots("H2")) == 5
    assert len(rootsys.generated_positive_roots("H3")) == 15
    assert len(rootsys.generated_positive_roots("H4")) == 60


def poly_from_roots(roots):
    coeffs = [1]
    for r in roots:
        coeffs = [0] + coeffs
        for i in range(len(coeffs) - 1):
            coeffs[i] -= r * coeffs[i + 1]
    return tuple(coeffs)


def test_exponents_factor_the_unit_constituent():
    # the unit-ideal constituent splits over the exponents of the system
    from dedarr import charquasi as cq
    from dedarr import ring as rg
    exponents = {"H2": [1, 4], "H3": [1, 5, 9]}
    for name, exps in exponents.items():
        data = rootsys.builtin(name)
        q = cq.constituents(data.arrangement)
        unit = rg.Ideal.unit(data.arrangement.ring)
        assert q.constituents[unit] == poly_from_roots(exps)
        # exponents pair up to the Coxeter number
        assert sorted(data.coxeter_number - e for e in exps) == exps
