import numpy as np
import pytest

from ncdomains import (BiPolynomial, OperatorTuple,
                       RegularPolynomial, ando_dilation, builtin_bipolynomials,
                       builtin_hermitian, builtin_matrix_polys, grid_sup_norm,
                       random_commuting_pair, run_battery, verify_inequality)
from ncdomains.harness import (commutant_lifting, compression_residual,
                               cross_commutation_residual, scale_into_domain,
                               verify_hermitian_inequality, von_neumann_check)

from conftest import random_nilpotent_tuple

Z = RegularPolynomial.single_variable([1.0])


def test_scale_into_domain():
    rng = np.random.default_rng(0)
    T = OperatorTuple((rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)),))
    S = scale_into_domain(Z, T, 0.4)
    top = float(np.linalg.norm(S.mats[0] @ S.mats[0].conj().T, 2))
    assert top <= 0.4 + 1e-9
    assert top >= 0.2  # the bisection should not undershoot wildly


def test_random_pairs_commute_and_are_members():
    from ncdomains import domain_membership
    for seed in range(6):
        for kind in ("jointly-nilpotent", "polynomial-of-single",
                     "upper-triangular-commuting"):
            pair = random_commuting_pair(seed, 4, kind, Z, Z)
            assert cross_commutation_residual(pair.T1, pair.T2) <= 1e-10
            assert domain_membership(Z, pair.T1).in_domain
            assert domain_membership(Z, pair.T2).in_domain


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        random_commuting_pair(0, 3, "bogus", Z, Z)


def test_bipoly_eval_scalar_matches_matrix():
    p = builtin_bipolynomials()[6]  # square_of_sum
    t1 = np.array([[0.3]])
    t2 = np.array([[0.2]])
    X, Y = OperatorTuple((t1,)), OperatorTuple((t2,))
    assert abs(p.eval(X, Y)[0, 0] - p.eval_scalar(np.array(0.3), np.array(0.2))) <= 1e-14


def test_grid_sup_norm_known_values():
    p = BiPolynomial("xy", 1, 1, {((1,), (1,)): 1.0})
    assert abs(grid_sup_norm(p, 64) - 1.0) <= 1e-12
    s = BiPolynomial("sum", 1, 1, {((1,), ()): 1.0, ((), (1,)): 1.0})
    assert abs(grid_sup_norm(s, 512) - 2.0) <= 1e-3


def test_dilation_reports_pass_nilpotent():
    pair = random_commuting_pair(0, 4, "jointly-nilpotent", Z, Z)
    dil = ando_dilation(pair)
    assert dil.report.passed, dil.report.render()
    # kernel columns are isometric (pure tuple)
    assert np.linalg.norm(dil.kernel.conj().T @ dil.kernel - np.eye(4), 2) <= 1e-10


def test_compression_identity_nilpotent():
    pair = random_commuting_pair(5, 4, "jointly-nilpotent", Z, Z)
    dil = ando_dilation(pair)
    for p in builtin_bipolynomials():
        assert compression_residual(dil, p) <= 1e-7


def test_inequality_basics_all_kinds():
    for kind in ("jointly-nilpotent", "polynomial-of-single",
                 "upper-triangular-commuting"):
        pair = random_commuting_pair(2, 3, kind, Z, Z)
        dil = ando_dilation(pair)
        rep = verify_inequality(pair, builtin_bipolynomials(), dil)
        assert rep.passed, rep.render()
        hrep = verify_hermitian_inequality(pair, builtin_hermitian(), dil)
        assert hrep.passed, hrep.render()


def test_matrix_polynomials():
    pair = random_commuting_pair(9, 4, "jointly-nilpotent", Z, Z)
    dil = ando_dilation(pair)
    rep = verify_inequality(pair, builtin_matrix_polys(), dil)
    assert rep.passed, rep.render()


def test_swapped_dilation_tightens():
    pair = random_commuting_pair(4, 3, "polynomial-of-single", Z, Z)
    dil = ando_dilation(pair)
    dil_sw = ando_dilation(pair.swapped())
    rep = verify_inequality(pair, builtin_bipolynomials(), dil, dil_sw)
    assert rep.passed, rep.render()


def test_von_neumann_baseline():
    pair = random_commuting_pair(3, 4, "upper-triangular-commuting", Z, Z)
    rep = von_neumann_check(pair, builtin_bipolynomials() + builtin_matrix_polys())
    assert rep.passed, rep.render()


def test_von_neumann_requires_baseline():
    f2 = RegularPolynomial.single_variable([1.0, 1.0])
    pair = random_commuting_pair(3, 3, "jointly-nilpotent", f2, Z)
    with pytest.raises(ValueError):
        von_neumann_check(pair, builtin_bipolynomials())


def test_degree_two_f_dilation():
    f2 = RegularPolynomial.single_variable([1.0, 0.5])
    pair = random_commuting_pair(8, 4, "jointly-nilpotent", f2, Z)
    dil = ando_dilation(pair)
    assert dil.report.passed, dil.report.render()
    rep = verify_inequality(pair, builtin_bipolynomials(), dil)
    assert rep.passed, rep.render()


def test_variety_constrained_dilation():
    """Single-variable pair dilated on its annihilating-polynomial model."""
    from ncdomains import build_variety
    from ncdomains.variety import minpoly_generator
    pair = random_commuting_pair(6, 3, "upper-triangular-commuting", Z, Z)
    # characteristic polynomial of T1 annihilates it (spectrum in the disk)
    roots = list(np.linalg.eigvals(pair.T1.mats[0]))
    assert max(abs(r) for r in roots) < 1.0
    dil_full = ando_dilation(pair)
    v = build_variety(Z, dil_full.N, [minpoly_generator(roots)])
    dil = ando_dilation(pair, N=dil_full.N, variety=v)
    for p in builtin_bipolynomials():
        lhs = float(np.linalg.norm(p.eval(pair.T1, pair.T2), 2))
        rhs = float(np.linalg.norm(p.eval(dil.left, dil.right), 2))
        assert rhs - lhs >= -1e-6
        assert compression_residual(dil, p) <= 1e-6


def test_commutant_lifting_square_and_rectangular():
    f = Z
    T1 = random_nilpotent_tuple(5, 1, 4, f)
    A = 0.7 * np.eye(4) + 0.3 * T1.mats[0]
    rep = commutant_lifting(f, T1, T1, A)
    assert rep.passed, rep.render()
    assert abs(float(rep.environment["lift_norm"]) - 1.0) <= 1e-8
    # leading-block restriction of an upper-triangular tuple
    T1p = OperatorTuple((T1.mats[0][:3, :3],))
    inj = np.zeros((4, 3), dtype=complex)
    inj[:3] = np.eye(3)
    rep2 = commutant_lifting(f, T1, T1p, inj)
    assert rep2.passed, rep2.render()


def test_battery_small_run():
    rep = run_battery(Z, Z, seeds=[0, 1, 2], dims=[3, 4], with_swapped=False)
    assert rep.passed, rep.render()
    assert rep.environment["pairs"] == "3"


def test_battery_determinism():
    a = run_battery(Z, Z, seeds=[7, 8], dims=[3], with_swapped=False).render()
    b = run_battery(Z, Z, seeds=[7, 8], dims=[3], with_swapped=False).render()
    assert a == b
