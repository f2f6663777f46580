"""
Galerkin finite elements for -(a y')' = f on (0, 1) with Dirichlet data.

Linear and quadratic Lagrange elements on uniform meshes h = 2^-level.
Element integrals use 3-point Gauss quadrature; the interior system is
symmetric positive definite and banded, and is solved by banded Cholesky.
Boundary data enter through lifting by the linear interpolant
g(x) = y(0) + (y(1) - y(0)) x.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Tuple, Union

import numpy as np
from scipy import linalg

from .errors import AssemblyError, DomainError, EllipticityError

logger = logging.getLogger(__name__)

Coefficient = Callable[[np.ndarray], np.ndarray]

_GAUSS_POINTS, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(3)
# Reference element is [0, 1]
QUAD_POINTS = 0.5 * (_GAUSS_POINTS + 1.0)
QUAD_WEIGHTS = 0.5 * _GAUSS_WEIGHTS


@dataclass(frozen=True)
class Mesh1D:
    """Uniform mesh of (0, 1) with 2^level elements."""

    level: int

    def __post_init__(self):
        if int(self.level) != self.level or self.level < 0:
            raise DomainError(f"mesh level must be a non-negative integer, got {self.level}")

    @property
    def n_elements(self) -> int:
        return 2 ** int(self.level)

    @property
    def h(self) -> float:
        return 1.0 / self.n_elements

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n_elements + 1)

    def quadrature_points(self) -> np.ndarray:
        """Physical Gauss points, shape (n_elements, 3)."""
        return self.nodes[:-1, None] + self.h * QUAD_POINTS[None, :]

    def dof_points(self, degree: int) -> np.ndarray:
        return np.linspace(0.0, 1.0, degree * self.n_elements + 1)


def _shape_functions(degree: int, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Reference values and d/dt on [0, 1], each of shape (len(t), degree + 1)."""
    t = np.asarray(t, dtype=float)
    if degree == 1:
        values = np.stack([1.0 - t, t], axis=-1)
        slopes = np.stack([-np.ones_like(t), np.ones_like(t)], axis=-1)
    elif degree == 2:
        values = np.stack([(1.0 - t) * (1.0 - 2.0 * t), 4.0 * t * (1.0 - t), t * (2.0 * t - 1.0)], axis=-1)
        slopes = np.stack([4.0 * t - 3.0, 4.0 - 8.0 * t, 4.0 * t - 1.0], axis=-1)
    else:
        raise DomainError(f"element degree must be 1 or 2, got {degree}")
    return values, slopes


@dataclass(frozen=True, eq=False)
class BandedSystem:
    """Interior stiffness matrix in upper banded storage and its load vector."""

    bands: np.ndarray
    rhs: np.ndarray

    @property
    def size(self) -> int:
        return self.rhs.shape[0]

    def matvec(self, x: np.ndarray) -> np.ndarray:
        p = self.bands.shape[0] - 1
        out = self.bands[p] * x
        for d in range(1, p + 1):
            band = self.bands[p - d, d:]
            out[:-d] += band * x[d:]
            out[d:] += band * x[:-d]
        return out


@dataclass(frozen=True, eq=False)
class FemSolution:
    """Nodal coefficients of y_h, boundary values included."""

    mesh: Mesh1D
    degree: int
    coefficients: np.ndarray = field(repr=False)
    coefficient: Coefficient = field(repr=False)

    def _locate(self, x) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any((x_arr < 0.0) | (x_arr > 1.0)) or not np.all(np.isfinite(x_arr)):
            raise DomainError("evaluation points must lie in [0, 1]")
        mesh = self.mesh
        element = np.minimum((x_arr / mesh.h).astype(int), mesh.n_elements - 1)
        t = (x_arr - element * mesh.h) / mesh.h
        local = element[:, None] * self.degree + np.arange(self.degree + 1)[None, :]
        return x_arr, t, self.coefficients[local]


def _evaluate_coefficient(a: Coefficient, points: np.ndarray) -> np.ndarray:
    values = np.asarray(a(points.ravel()), dtype=float)
    if values.ndim == 0:
        values = np.full(points.size, float(values))
    return values.reshape(points.shape)


def assemble_system(
    a: Coefficient,
    f: Coefficient,
    bc: Tuple[float, float],
    mesh: Mesh1D,
    degree: int,
) -> BandedSystem:
    """
    Assemble the lifted interior Galerkin system.

    Raises:
        EllipticityError: a <= 0 at some quadrature point
    """
    if degree not in (1, 2):
        raise DomainError(f"element degree must be 1 or 2, got {degree}")
    h = mesh.h
    points = mesh.quadrature_points()
    a_q = _evaluate_coefficient(a, points)
    if not np.all(a_q > 0.0):
        bad = points[~(a_q > 0.0)][0]
        raise EllipticityError(f"diffusion coefficient not positive at x={bad:.6g}")
    f_q = _evaluate_coefficient(f, points)

    phi, dphi = _shape_functions(degree, QUAD_POINTS)
    dphi = dphi / h
    weights = QUAD_WEIGHTS * h
    lift_slope = bc[1] - bc[0]

    stiffness = np.einsum("eq,q,qi,qj->eij", a_q, weights, dphi, dphi)
    load = np.einsum("eq,q,qi->ei", f_q, weights, phi) - lift_slope * np.einsum(
        "eq,q,qi->ei", a_q, weights, dphi
    )

    n_dofs = degree * mesh.n_elements + 1
    first = np.arange(mesh.n_elements) * degree
    bands_full = np.zeros((degree + 1, n_dofs))
    rhs_full = np.zeros(n_dofs)
    for i in range(degree + 1):
        np.add.at(rhs_full, first + i, load[:, i])
        for j in range(i, degree + 1):
            np.add.at(bands_full[j - i], first + i, stiffness[:, i, j])

    m = n_dofs - 2
    bands = np.zeros((degree + 1, max(m, 0)))
    for d in range(degree + 1):
        if m - d > 0:
            bands[degree - d, d:] = bands_full[d, 1 : n_dofs - 1 - d]
    return BandedSystem(bands=bands, rhs=rhs_full[1:-1])


def solve(
    a: Coefficient,
    f: Coefficient,
    bc: Tuple[float, float],
    mesh: Mesh1D,
    degree: int = 1,
) -> FemSolution:
    """
    Galerkin solution of -(a y')' = f, y(0) = bc[0], y(1) = bc[1].

    Args:
        a: Vectorized positive diffusion coefficient
        f: Vectorized right-hand side
        bc: Dirichlet values (y(0), y(1))
        mesh: Uniform mesh
        degree: 1 (linear) or 2 (quadratic) elements

    Returns:
        FemSolution holding nodal values at mesh.dof_points(degree)

    Raises:
        EllipticityError: Non-positive coefficient at a quadrature point
        AssemblyError: Stiffness matrix not positive definite
    """
    system = assemble_system(a, f, bc, mesh, degree)
    interior = np.zeros(0)
    if system.size > 0:
        try:
            interior = linalg.solveh_banded(system.bands, system.rhs, lower=False)
        except linalg.LinAlgError as exc:
            raise AssemblyError(f"stiffness matrix is singular: {exc}") from exc
        logger.debug("P%d solve on %d elements: %d unknowns", degree, mesh.n_elements, system.size)

    x = mesh.dof_points(degree)
    coefficients = bc[0] + (bc[1] - bc[0]) * x
    coefficients[1:-1] += interior
    return FemSolution(mesh=mesh, degree=degree, coefficients=coefficients, coefficient=a)


def point_value(sol: FemSolution, x) -> Union[float, np.ndarray]:
    """Value of the finite-element function at x in [0, 1]."""
    _, t, local = sol._locate(x)
    values, _ = _shape_functions(sol.degree, t)
    result = np.sum(values * local, axis=-1)
    return float(result[0]) if np.ndim(x) == 0 else result


def flux(sol: FemSolution, x) -> Union[float, np.ndarray]:
    """
    Flow rate q_h(x) = -a(x) y_h'(x).

    The derivative is taken from the element containing x; x = 1 uses the
    last element and x = 0 the first.
    """
    x_arr, t, local = sol._locate(x)
    _, slopes = _shape_functions(sol.degree, t)
    derivative = np.sum(slopes * local, axis=-1) / sol.mesh.h
    a_x = _evaluate_coefficient(sol.coefficient, x_arr)
    result = -a_x * derivative
    return float(result[0]) if np.ndim(x) == 0 else result


def zero_load_right_flux(
    a_quad: np.ndarray,
    a_right: np.ndarray,
    bc: Tuple[float, float],
) -> np.ndarray:
    """
    q_h(1) of the linear-element solution with f = 0 for a batch of coefficients.

    With zero load the tridiagonal system reduces to elements in series: each
    element carries the same flux J = (y(0) - y(1)) / sum_e h / abar_e, where
    abar_e is the Gauss average of a on element e. Exact elimination of the
    system assembled by ``solve`` with ``degree=1``.

    Args:
        a_quad: Coefficient at ``Mesh1D.quadrature_points()``, shape (N, n_elements, 3)
        a_right: Coefficient at x = 1, shape (N,)
        bc: Dirichlet values (y(0), y(1))

    Returns:
        Array of shape (N,)
    """
    a_quad = np.asarray(a_quad, dtype=float)
    if not np.all(a_quad > 0.0):
        raise EllipticityError("diffusion coefficient not positive at a quadrature point")
    n_elements = a_quad.shape[-2]
    h = 1.0 / n_elements
    averages = a_quad @ QUAD_WEIGHTS
    current = (bc[0] - bc[1]) / np.sum(h / averages, axis=-1)
    return np.asarray(a_right) * current / averages[..., -1]
