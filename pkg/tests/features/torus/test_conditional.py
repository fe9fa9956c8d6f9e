"""Tests for the slice conditional on the torus."""

import pytest


def test_slice_density_is_constant():
    """On x = 0, p / J Phi is the same on both branches and the masses split evenly."""
    from features.torus import TorusParams, conditional_slice_check

    report = conditional_slice_check(TorusParams(R=1.0, r=0.9), grid=1000)
    assert report.max_relative_deviation < 1e-9
    assert report.branch_masses[0] == pytest.approx(0.5, abs=1e-9)
    assert report.level == pytest.approx(1.0)


def test_slice_check_other_radii():
    from features.torus import TorusParams, conditional_slice_check

    report = conditional_slice_check(TorusParams(R=3.0, r=1.0), grid=200)
    assert report.max_relative_deviation < 1e-9
    assert report.level == pytest.approx(1 / 3.0)
    assert report.to_dict()["grid"] == 200


def test_slice_check_grid_validation():
    from core.errors import InputError
    from features.torus import TorusParams, conditional_slice_check

    with pytest.raises(InputError):
        conditional_slice_check(TorusParams(R=1.0, r=0.5), grid=1)
