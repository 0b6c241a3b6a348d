"""Spatial norms of P1 functions, computed exactly element by element."""

import numpy as np

from peterlin.decorators import requires_kind
from peterlin.fem.FeFunction import FROBENIUS_WEIGHTS


def _component_weights(function):
    if function.kind == "symtensor2":
        return FROBENIUS_WEIGHTS
    return np.ones(function.n_components)


def l2_norm_squared(function):
    """Exact ``||f||_0^2``; tensors use the Frobenius product."""
    local = function.nodal[function.mesh.triangles]
    # integral of a P1 function squared on K: |K| / 12 (sum x_a^2 + (sum x_a)^2)
    per_component = np.einsum(
        "k,kc->c",
        function.mesh.areas / 12.0,
        (local**2).sum(axis=1) + local.sum(axis=1) ** 2,
    )
    return float(per_component @ _component_weights(function))


def h1_seminorm_squared(function, scale=None):
    """Exact ``|f|_1^2``, optionally weighting each triangle by ``scale``."""
    mesh = function.mesh
    factor = mesh.areas if scale is None else mesh.areas * scale
    per_component = np.einsum("k,kcj->c", factor, function.gradients() ** 2)
    return float(per_component @ _component_weights(function))


def norms(function):
    """L2 norm and H1 seminorm of a P1 function.

    Returns
    -------

    dict
      ``{"l2": ||f||_0, "h1_semi": |f|_1}``.

    Examples
    --------

    >>> from peterlin.fem import FeFunction
    >>> from peterlin.mesh import build_structured
    >>> f = FeFunction.interpolate(build_structured(8), lambda x: x[:, 0])
    >>> round(float(norms(f)["l2"]) ** 2, 12)
    0.333333333333
    """
    return {
        "l2": np.sqrt(l2_norm_squared(function)),
        "h1_semi": np.sqrt(h1_seminorm_squared(function)),
    }


def h1_norm(function):
    """Full H1 norm ``(||f||_0^2 + |f|_1^2)^(1/2)``."""
    return np.sqrt(l2_norm_squared(function) + h1_seminorm_squared(function))


@requires_kind("scalar")
def pressure_h_seminorm(pressure):
    """``|p|_h = (sum_K h_K^2 ||grad p||_K^2)^(1/2)`` with ``h_K`` the triangle
    diameters.
    """
    return np.sqrt(h1_seminorm_squared(pressure, scale=pressure.mesh.h_K**2))
