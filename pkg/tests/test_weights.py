"""Weight families, file format, and accelerant kernels."""

import numpy as np
import pytest

from canonfactor import (Accelerant, DomainError, ValidationError,
                         accelerant_from_weight, constant_weight,
                         cosine_bump_weight, read_weight, sampled_weight,
                         sinc_bump_weight, step_weight, truncate_weight,
                         weight_by_name, write_weight)


def test_weight_family_bounds():
    mu = step_weight(2.0, 1.0)
    assert mu.c1 == 1.0 and mu.c2 == 2.0
    assert mu.tail == 1.0 and mu.window == 1.0
    mu = sinc_bump_weight(0.5, 1.0)
    assert mu.c1 == 1.0 and mu.c2 == 1.5
    mu = constant_weight(0.7)
    assert mu.is_constant and mu(123.0) == 0.7


def test_weight_by_name_dispatch():
    mu = weight_by_name("step", inner=3.0, half_width=0.5)
    assert mu(0.0) == 3.0 and mu(0.7) == 1.0
    with pytest.raises(DomainError):
        weight_by_name("nope")
    with pytest.raises(DomainError):
        weight_by_name("constant", c=-1.0)


def test_weight_evaluation_vectorized():
    mu = step_weight(2.0, 1.0)
    xs = np.array([-1.5, -0.5, 0.0, 0.5, 1.5])
    assert np.array_equal(mu(xs), [1.0, 2.0, 2.0, 2.0, 1.0])


def test_weight_file_round_trip(tmp_path):
    x = np.linspace(-3.0, 3.0, 25)
    mu = sampled_weight(x, 1.0 + 0.5 * np.exp(-x * x), tail=1.0)
    path = tmp_path / "w.txt"
    write_weight(mu, path, x)
    back = read_weight(path)
    assert np.array_equal(back(x), mu(x))
    path.write_text("1.0 2.0\n")
    with pytest.raises(ValidationError):
        read_weight(path)


# -- accelerants ---------------------------------------------------------------

def test_step_accelerant_is_sinc():
    # w - 1 = indicator of [-1,1]: k(t) = sin t / (pi t)
    mu = step_weight(2.0, 1.0)
    k = mu.closed_form_accelerant()
    ts = np.linspace(-6.0, 6.0, 41)
    ref = np.sinc(ts / np.pi) / np.pi
    assert np.max(np.abs(k(ts) - ref)) < 1e-14
    assert abs(k(0.0) - 1.0 / np.pi) < 1e-15


def test_sinc_bump_accelerant_is_hat():
    # w = 1 + A sinc^2(Bx) transforms to a triangular hat of radius 2B
    A, B = 0.5, 1.0
    acc = accelerant_from_weight(sinc_bump_weight(A, B), 3.0, 25)
    ts = np.linspace(-3.0, 3.0, 25)
    ref = (A / (2.0 * B)) * np.maximum(1.0 - np.abs(ts) / (2.0 * B), 0.0)
    assert np.max(np.abs(acc.closed_form(ts) - ref)) < 1e-14
    assert acc.band_limit == 2.0 * B


def test_negative_control_accelerant():
    # w = 1 - indicator[-1/2,1/2]: k(t) = -sin(t/2)/(pi t)
    k = step_weight(0.0, 0.5).closed_form_accelerant()
    ts = np.array([0.3, 1.0, 4.0])
    assert np.allclose(k(ts), -np.sin(ts / 2.0) / (np.pi * ts), atol=1e-14)


def test_numeric_accelerant_matches_closed_forms():
    for mu in (step_weight(2.0, 1.0), cosine_bump_weight(1.0, 1.0),
               sinc_bump_weight(0.5, 1.0)):
        acc = accelerant_from_weight(mu, 4.0, 33)
        ref = mu.closed_form_accelerant()
        dev = np.max(np.abs(acc(acc.times) - ref(acc.times)))
        assert dev < 1e-9, mu.label


def test_accelerant_even_and_interpolates():
    mu = cosine_bump_weight(1.0, 1.0)
    acc = accelerant_from_weight(mu, 5.0, 41)
    ts = np.linspace(0.0, 4.9, 23)
    assert np.allclose(acc(-ts), acc(ts))
    ref = mu.closed_form_accelerant()
    assert np.max(np.abs(acc(ts) - ref(ts))) < 1e-8


def test_truncate_weight_clamps_deviation():
    mu = sinc_bump_weight(0.5, 1.0)
    cut = truncate_weight(mu, 3.0)
    assert cut(10.0) == mu.tail
    assert cut(0.5) == mu(0.5)
    assert cut.window <= 3.0


def test_constant_weight_has_zero_accelerant():
    acc = accelerant_from_weight(constant_weight(1.0), 2.0, 9)
    assert np.all(acc.values == 0.0)
    assert np.allclose(acc.closed_form(np.linspace(-2, 2, 9)), 0.0)
