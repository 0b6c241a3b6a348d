"""Decorators used by peterlin."""
import inspect
import os

import decorator


@decorator.decorator
def requires_same_mesh(func, first, second, *args, **kwargs):
    """Raises an error if the two first arguments live on different meshes."""
    if getattr(first, "mesh", None) is not getattr(second, "mesh", None):
        raise ValueError(
            "Arguments of %s must be defined on the same mesh" % func.__name__
        )
    return func(first, second, *args, **kwargs)


def requires_kind(*kinds):
    """Raises an error if the first argument is a finite-element function whose
    ``kind`` is not one of ``kinds``.
    """

    @decorator.decorator
    def wrapper(func, function, *args, **kwargs):
        if function.kind not in kinds:
            raise ValueError(
                "%s requires a function of kind %s, got '%s'"
                % (func.__name__, " or ".join(repr(k) for k in kinds), function.kind)
            )
        return func(function, *args, **kwargs)

    return wrapper


@decorator.decorator
def requires_positive_step(func, *args, **kwargs):
    """Raises an error if the ``dt`` argument of the function is not positive."""
    names = inspect.getfullargspec(func).args
    bound = dict(zip(names, args))
    bound.update(kwargs)
    if "dt" in bound and not bound["dt"] > 0:
        raise ValueError("'dt' should be a positive number, got %r" % bound["dt"])
    return func(*args, **kwargs)


def preprocess_args(fun, varnames):
    """Applies fun to variables in varnames before launching the function."""

    def wrapper(func, *args, **kwargs):
        names = inspect.getfullargspec(func).args
        new_args = [
            fun(arg) if (name in varnames) and (arg is not None) else arg
            for (arg, name) in zip(args, names)
        ]
        new_kwargs = {
            kwarg: fun(value) if kwarg in varnames and value is not None else value
            for (kwarg, value) in kwargs.items()
        }
        return func(*new_args, **new_kwargs)

    return decorator.decorator(wrapper)


def convert_path_to_string(varnames):
    """Converts the specified variables to a path string."""
    return preprocess_args(os.fspath, varnames)
