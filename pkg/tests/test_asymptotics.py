from fractions import Fraction

import pytest

from bilinear_census.asymptotics import (
    TARGETS,
    AsymptoticPrediction,
    BoundsPair,
    Residue,
    bounds_report,
    build_target,
    convergence_report,
    exact_avg_weight_so,
    exact_avg_weight_unrestricted,
    exact_sigma_so,
    exact_so_density,
    exact_tau,
    exact_zeta,
    predict_avg_weight_so,
    predict_avg_weight_unrestricted,
    predict_non_mds_density,
    predict_sigma_so,
    predict_so_density,
    predict_tau,
    predict_zeta,
)
from bilinear_census.bilinear import TypeTag
from bilinear_census.config import get_residue_ladder
from bilinear_census.errors import PreconditionViolated, ResidueMismatch


def test_prediction_value():
    p = AsymptoticPrediction(Fraction(6), 1, Residue.EVEN, offset=1, exact=True)
    assert p.value(4) == 18
    assert p.describe() == "6*(q-1)^1"
    assert p.to_json()['coefficient'] == '6'


def test_so_density_shapes():
    assert predict_so_density(TypeTag.P, 5, 2) == AsymptoticPrediction(Fraction(1), -3, Residue.ODD)
    assert predict_so_density(TypeTag.H, 4, 2).coefficient == 2
    assert predict_so_density(TypeTag.N0A, 4, 2).exponent == -1
    with pytest.raises(PreconditionViolated):
        predict_so_density(TypeTag.E, 4, 2)


def test_sigma_so_residue_resolution():
    # n = 4 在奇数 q 下总是 H 型
    p = predict_sigma_so('odd', 4, 2)
    assert (p.coefficient, p.exponent) == (2, 1)
    with pytest.raises(PreconditionViolated):
        predict_sigma_so('any', 4, 2)
    assert predict_sigma_so('3mod4', 6, 2).coefficient == 1


def test_tau_prediction():
    # 2k = n 且 k = w 时系数为 2
    p = predict_tau(4, 2, 2)
    assert (p.coefficient, p.exponent) == (2, 1)
    assert predict_tau(6, 2, 3).coefficient == 1


def test_zeta_exact_small_weights():
    assert predict_zeta('even', 5, 1).is_zero
    even = predict_zeta('even', 5, 2)
    assert even.exact
    for q in (2, 4, 8):
        assert even.value(q) == exact_zeta(5, 2)(q)
    one_mod_4 = predict_zeta('1mod4', 4, 2)
    for q in (5, 9, 13):
        assert one_mod_4.value(q) == exact_zeta(4, 2)(q)
    assert predict_zeta('3mod4', 4, 2).is_zero
    with pytest.raises(PreconditionViolated):
        predict_zeta('odd', 4, 2)


def test_non_mds_bounds():
    assert isinstance(predict_non_mds_density(6, 2, 4, 'odd'), AsymptoticPrediction)
    pair = predict_non_mds_density(6, 3, 4, 'even')
    assert isinstance(pair, BoundsPair)
    assert pair.lower.exponent == -2
    assert pair.upper.exponent == -1


def test_so_density_converges():
    ladder = get_residue_ladder('odd')
    report = convergence_report(exact_so_density(TypeTag.P, 5, 2), predict_so_density(TypeTag.P, 5, 2), ladder)
    assert report.verdict
    assert report.improved
    assert report.samples[-1].q == 25
    assert abs(report.samples[-1].ratio - 1) < Fraction(15, 100)


@pytest.mark.parametrize("prediction, exact, residue", [
    (predict_sigma_so('even', 6, 2), exact_sigma_so(6, 2), 'even'),
    (predict_sigma_so('odd', 5, 2), exact_sigma_so(5, 2), 'odd'),
    (predict_zeta('odd', 5, 4), exact_zeta(5, 4), 'odd'),
    (predict_avg_weight_so('even', 6, 2, 4), exact_avg_weight_so(6, 2, 4), 'even'),
    # H 型：中间常数在平均值里消掉
    (predict_avg_weight_so('1mod4', 4, 2, 3), exact_avg_weight_so(4, 2, 3), '1mod4'),
    (predict_avg_weight_unrestricted(5, 2, 3), exact_avg_weight_unrestricted(5, 2, 3), 'any'),
    (predict_tau(6, 2, 3), exact_tau(6, 2, 3), 'any'),
])
def test_predictors_improve_over_ladder(prediction, exact, residue):
    report = convergence_report(exact, prediction, get_residue_ladder(residue))
    assert report.improved


def test_exact_prediction_for_zero():
    report = convergence_report(exact_zeta(4, 2), predict_zeta('3mod4', 4, 2), get_residue_ladder('3mod4'))
    assert report.verdict
    assert all(s.ratio is None for s in report.samples)


def test_residue_mismatch():
    with pytest.raises(ResidueMismatch):
        convergence_report(exact_sigma_so(6, 2), predict_sigma_so('even', 6, 2), [2, 3])


def test_bounds_report_json():
    pair = BoundsPair(
        lower=AsymptoticPrediction(Fraction(1), -2, Residue.ANY),
        upper=AsymptoticPrediction(Fraction(1), 0, Residue.ANY),
    )
    report = bounds_report(lambda q: Fraction(1, q), pair, [2, 3, 4])
    assert report.verdict
    data = report.to_json()
    assert [s['q'] for s in data['samples']] == [2, 3, 4]
    assert data['samples'][0]['exact'] == '1/2'


def test_build_target():
    prediction, exact, description = build_target('sigma', 'odd', 5, k=2)
    assert prediction == predict_sigma_so('odd', 5, 2)
    assert exact(3) == exact_sigma_so(5, 2)(3)
    assert 'sigma' in description
    assert set(TARGETS) >= {'so-density', 'zeta', 'non-mds'}
    with pytest.raises(ValueError):
        build_target('nope', 'any', 4)
