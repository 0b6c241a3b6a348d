"""Decorators tests."""

import pathlib

import pytest

from peterlin.decorators import (
    convert_path_to_string,
    requires_kind,
    requires_positive_step,
    requires_same_mesh,
)
from peterlin.fem import FeFunction


def test_requires_same_mesh(mesh):
    @requires_same_mesh
    def combine(first, second):
        return "combined"

    f = FeFunction(mesh(2), "scalar")
    g = FeFunction(mesh(2), "scalar")
    assert combine(f, g) == "combined"

    with pytest.raises(ValueError) as exc:
        combine(f, FeFunction(mesh(3), "scalar"))
    assert "same mesh" in str(exc.value)


@pytest.mark.parametrize(
    ("kind", "raises"),
    (("vector2", False), ("symtensor2", False), ("scalar", True)),
)
def test_requires_kind(mesh, kind, raises):
    @requires_kind("vector2", "symtensor2")
    def size(function):
        return function.n_components

    function = FeFunction(mesh(2), kind)
    if raises:
        with pytest.raises(ValueError) as exc:
            size(function)
        assert "'vector2' or 'symtensor2'" in str(exc.value)
    else:
        assert size(function) == function.n_components


@pytest.mark.parametrize(
    ("args", "kwargs", "raises"),
    (
        ((0.1,), {}, False),
        ((), {"dt": 0.1}, False),
        ((0.0,), {}, True),
        ((), {"dt": -1.0}, True),
    ),
)
def test_requires_positive_step(args, kwargs, raises):
    @requires_positive_step
    def step(dt):
        return dt

    if raises:
        with pytest.raises(ValueError) as exc:
            step(*args, **kwargs)
        assert "'dt' should be a positive number" in str(exc.value)
    else:
        assert step(*args, **kwargs) == 0.1


@pytest.mark.parametrize(
    ("given", "expected"),
    (
        ("mesh.txt", "mesh.txt"),
        (pathlib.Path("out") / "convergence.csv", "out/convergence.csv"),
        (None, None),
    ),
)
def test_convert_path_to_string(given, expected):
    @convert_path_to_string(["filename"])
    def identity(filename):
        return filename

    result = identity(given)
    if expected is None:
        assert result is None
    else:
        assert pathlib.PurePath(result) == pathlib.PurePath(expected)
        assert isinstance(result, str)
