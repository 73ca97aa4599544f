#!/usr/bin/env python3
"""
Tests for the seeded random-body generators
"""

import numpy as np
import pytest

from bodies import vertex_form
from ellipsoid_engine import JohnDecomposition, john_decomposition, john_verify
from errors import ParameterOutOfRange
from random_bodies import random_john_body


@pytest.mark.parametrize("generator", ["vpolytope", "construction"])
@pytest.mark.parametrize("n", [2, 3])
def test_bodies_are_in_john_position(n, generator):
    K = random_john_body(n, complexity=3, seed=17, generator=generator)
    assert john_verify(john_decomposition(K), K).passed


@pytest.mark.parametrize("n", [2, 3])
def test_construction_keeps_analytic_decomposition(n):
    K = random_john_body(n, complexity=3, seed=23, generator="construction")
    analytic = JohnDecomposition(K.certificate.contacts, K.certificate.weights)
    assert john_verify(analytic, K).passed
    assert K.certificate.params["extra"] == 3


def test_same_seed_same_body():
    a = random_john_body(3, seed=5)
    b = random_john_body(3, seed=5)
    assert np.array_equal(vertex_form(a), vertex_form(b))


def test_zero_complexity_is_the_cube():
    V = vertex_form(random_john_body(3, complexity=0))
    assert np.abs(V) == pytest.approx(np.ones((8, 3)))


def test_rejects_bad_arguments():
    with pytest.raises(ParameterOutOfRange):
        random_john_body(1)
    with pytest.raises(ParameterOutOfRange):
        random_john_body(3, generator="gaussian")
