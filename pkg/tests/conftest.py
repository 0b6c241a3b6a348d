"""Define general test helper attributes and utilities."""

import ast
import contextlib
import functools
import importlib
import inspect
import io
import os
import pkgutil
import tempfile

import numpy as np

import pytest

from peterlin.manufactured import get_exact_solution
from peterlin.mesh import build_structured


TMP_DIR = tempfile.gettempdir()  # because tempfile.tempdir is sometimes None

# Convergence studies take minutes; they only run when this is set.
SLOW_TESTS = os.getenv("PETERLIN_SLOW_TESTS", "0") not in ("", "0")


@functools.lru_cache(maxsize=None)
def get_mesh(n=4):
    return build_structured(n)


@functools.lru_cache(maxsize=None)
def get_exact():
    return get_exact_solution()


def get_random_symmetric(size, seed=0, scale=10.0):
    rng = np.random.default_rng(seed)
    matrices = rng.uniform(-scale, scale, (size, 2, 2))
    return 0.5 * (matrices + np.swapaxes(matrices, 1, 2))


@functools.lru_cache(maxsize=None)
def get_peterlin_modules():
    """Get all peterlin module names and if each one is a package."""
    response = []
    with contextlib.redirect_stdout(io.StringIO()):
        peterlin_module = importlib.import_module("peterlin")

        modules = pkgutil.walk_packages(
            path=peterlin_module.__path__,
            prefix=peterlin_module.__name__ + ".",
        )

        for importer, modname, ispkg in modules:
            if modname == "peterlin.__main__":
                continue
            response.append((modname, ispkg))
    return response


def get_functions_with_decorator_defined(code, decorator_name):
    """Get all functions in a code object which have a decorator defined,
    along with the arguments of the function and the decorator.

    Parameters
    ----------

    code : object
      Module or class object from which to retrieve the functions.

    decorator_name : str
      Name of the decorator defined in the functions to search.
    """

    class FunctionsWithDefinedDecoratorExtractor(ast.NodeVisitor):
        def __init__(self, *args, **kwargs):
            super().__init__(*args, **kwargs)

            self.functions_with_decorator = []

        def generic_visit(self, node):
            if isinstance(node, ast.FunctionDef) and node.decorator_list:
                for dec in node.decorator_list:
                    if not isinstance(dec, ast.Call) or not isinstance(
                        dec.func, ast.Name
                    ):
                        continue
                    if dec.func.id != decorator_name:
                        continue

                    decorator_argument_names = []
                    for args in dec.args:
                        if isinstance(args, (ast.List, ast.Tuple)):
                            decorator_argument_names.extend(
                                [e.value for e in args.elts]
                            )
                        else:
                            decorator_argument_names.append(args.value)

                    function_argument_names = [arg.arg for arg in node.args.args]
                    for arg in node.args.kwonlyargs:
                        function_argument_names.append(arg.arg)

                    self.functions_with_decorator.append(
                        {
                            "function_name": node.name,
                            "function_arguments": function_argument_names,
                            "decorator_arguments": decorator_argument_names,
                        }
                    )

            ast.NodeVisitor.generic_visit(self, node)

    modtree = ast.parse(inspect.getsource(code))
    visitor = FunctionsWithDefinedDecoratorExtractor()
    visitor.visit(modtree)
    return visitor.functions_with_decorator


@pytest.fixture
def util():
    class PeterlinTestUtils:
        TMP_DIR = TMP_DIR
        SLOW_TESTS = SLOW_TESTS

    return PeterlinTestUtils


@pytest.fixture
def mesh():
    return get_mesh


@pytest.fixture
def exact():
    return get_exact()


@pytest.fixture
def peterlin_modules():
    return get_peterlin_modules


@pytest.fixture
def functions_with_decorator_defined():
    return get_functions_with_decorator_defined
