import dataclasses
from fractions import Fraction

import pytest

from degen.invariants import (
    CONTRIBUTIONS,
    FitInconsistentError,
    branch_stats,
    case_summary,
    chern,
    fit_contributions,
)

FACTORIAL_SIX = 720


def test_branch_stats_match_catalog(records):
    for rec in records:
        bs = branch_stats(rec.complex)
        exp = rec.expected
        assert bs.n == 6, rec.name
        assert (bs.m, bs.mu, bs.d, bs.rho) == (exp.m, exp.mu, exp.d, exp.rho), rec.name


def test_chern_coefficients_match_catalog(records):
    for rec in records:
        cd = chern(branch_stats(rec.complex))
        exp = rec.expected
        got = (cd.c1_sq_coeff, cd.c2_coeff, cd.chi_coeff)
        assert got == (exp.c1_sq_coeff, exp.c2_coeff, exp.chi_coeff), rec.name


@pytest.mark.parametrize(
    "name, coeffs",
    [
        ("U_{0,4}", (4, 4, Fraction(-4, 3))),
        ("U_{0,7}", (4, Fraction(11, 2), Fraction(-7, 3))),
        ("U_{3∪3}", (16, 11, -2)),
    ],
)
def test_chern_spot_values(by_name, name, coeffs):
    cd = chern(branch_stats(by_name[name].complex))
    assert (cd.c1_sq_coeff, cd.c2_coeff, cd.chi_coeff) == coeffs
    assert cd.c1_sq == coeffs[0] * FACTORIAL_SIX
    assert cd.c2 == coeffs[1] * FACTORIAL_SIX
    assert cd.chi == coeffs[2] * FACTORIAL_SIX


def test_euler_characteristic_is_negative_third_multiple(records):
    for rec in records:
        cd = chern(branch_stats(rec.complex))
        assert cd.chi < 0, rec.name
        a = cd.chi / Fraction(-FACTORIAL_SIX, 3)
        assert a.denominator == 1 and 1 <= a <= 7, rec.name


def test_fit_recovers_contribution_table(records):
    fit = fit_contributions([case_summary(rec.complex) for rec in records])
    assert set(fit) == set(CONTRIBUTIONS)
    for key, (mu_c, d_c, rho_c) in fit.items():
        assert (mu_c, d_c, rho_c) == tuple(
            Fraction(x) for x in CONTRIBUTIONS[key]
        ), key


def test_fit_rejects_perturbed_summary(records):
    summaries = [case_summary(rec.complex) for rec in records]
    summaries[5] = dataclasses.replace(summaries[5], mu=summaries[5].mu + 1)
    with pytest.raises(FitInconsistentError):
        fit_contributions(summaries)


def test_summary_agrees_with_branch_stats(records):
    for rec in records:
        s = case_summary(rec.complex)
        bs = branch_stats(rec.complex)
        assert (s.mu, s.d, s.rho) == (bs.mu, bs.d, bs.rho), rec.name
        assert sum(count for _, count in s.vertex_counts) == len(
            rec.complex.classify_vertices()
        ), rec.name
