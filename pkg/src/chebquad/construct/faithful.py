"""Small-dimension realisation of the topological existence argument for equal-weight circle quadratures.

The moment curve is sampled on a finite set, its convex hull is triangulated, every point of the hull is mapped to
N nodes through a piecewise-linear counting function, and the zero of the summed moment map over the hull is found
numerically.
"""

import logging

import dask
import numpy as np
from pydantic import Field
from scipy.optimize import linprog, minimize, root
from scipy.spatial import ConvexHull, QhullError

from chebquad.base import CqBaseModel
from chebquad.bounds.kane import KaneSearchOptions, kane_sup
from chebquad.construct.moment import basis_moments, moment_matrix
from chebquad.construct.quadrature import Quadrature, verify
from chebquad.construct.solver import ConvergenceError, MomentSystem, damped_least_squares
from chebquad.errors import PreconditionError
from chebquad.logging_chebquad import LOGGER, log_it
from chebquad.shared import TWO_PI, compute_ordered, spawn_rngs
from chebquad.trig.norms import l1_norm
from chebquad.trig.poly import TrigPoly
from chebquad.weight.spec import Domain, WeightSpec

_INTERIOR_MARGIN = 1e-12
_SINGULAR_VOLUME = 1e-14
_SPREAD = 1e-3


class FaithfulOptions(CqBaseModel):
    max_degree: int = Field(default=3, ge=1, description="Largest n accepted. The hull lives in dimension 2n.")
    sample_factor: int = Field(default=8, ge=1, description="Initial sample count is sample_factor * (2n + 1).")
    support_checks: int = Field(default=200, ge=1, description="Random zero-mean polynomials used to check the sample set.")
    max_doublings: int = Field(default=4, ge=0, description="How often the sample set may be doubled.")
    starts: int = Field(default=8, ge=1, description="Random hull starts, added to the origin and up to this many vertices.")
    polish_iter: int = Field(default=200, ge=1, description="Damped least-squares iterations applied to each hull solution.")
    hull_widenings: int = Field(default=2, ge=0, description="How often the sample set is doubled when every start stalls.")
    seed: int = 0
    target: float = Field(default=1e-8, gt=0, description="Verify residual the returned quadrature must reach.")
    sup_estimate: float | None = Field(default=None, gt=0, description="Skip the supremum search and use this value.")
    kane: KaneSearchOptions = KaneSearchOptions()


class SampledHull:
    """Convex hull of the moment curve over a sample set, with a pulling triangulation from one vertex."""

    def __init__(self, samples: np.ndarray, points: np.ndarray) -> None:
        self.samples = samples
        self.points = points
        hull = ConvexHull(points, qhull_options="Qt")
        self.vertices = points[hull.vertices]
        self.normals = hull.equations[:, :-1]
        self.offsets = hull.equations[:, -1]
        apex = int(hull.vertices[0])
        simplices = [np.concatenate([[apex], facet]) for facet in hull.simplices if apex not in facet]
        simplices_arr = np.asarray(simplices, dtype=int)
        vertices = points[simplices_arr]
        edges = np.transpose(vertices[:, 1:, :] - vertices[:, :1, :], (0, 2, 1))
        volumes = np.abs(np.linalg.det(edges))
        keep = volumes > _SINGULAR_VOLUME * max(float(np.max(volumes)), 1.0)
        self.simplices = simplices_arr[keep]
        self.origins = vertices[keep, 0, :]
        self.inverses = np.linalg.inv(edges[keep])
        LOGGER(f"triangulated hull of {points.shape[0]} points into {self.simplices.shape[0]} simplices", level=logging.DEBUG)

    def retract(self, y: np.ndarray) -> np.ndarray:
        """Radial projection onto the hull along the gauge of the polytope. The origin must be interior."""
        gauge = float(np.max(self.normals @ y / -self.offsets))
        return y / max(1.0, gauge)

    def barycentric(self, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vertex indices and barycentric coordinates of `v` in the simplex containing it most deeply."""
        tail = np.einsum("sij,sj->si", self.inverses, v[None, :] - self.origins)
        coords = np.column_stack([1.0 - tail.sum(axis=1), tail])
        best = int(np.argmax(coords.min(axis=1)))
        alphas = np.clip(coords[best], 0.0, None)
        return self.simplices[best], alphas / alphas.sum()


def node_functions(abscissae: np.ndarray, alphas: np.ndarray, node_count: int) -> np.ndarray:
    """Nodes f_1..f_N where f_i is the first x in [-pi, pi) with rho(x) >= i.

    rho(x) = (pi + x) / (2 pi) + N * (sum of alphas whose abscissa is <= x), increasing with jumps at the abscissae.
    """
    order = np.argsort(abscissae)
    jumps_at = np.asarray(abscissae, dtype=float)[order]
    jumps = node_count * np.asarray(alphas, dtype=float)[order]
    starts = np.concatenate([[-np.pi], jumps_at])
    ends = np.concatenate([jumps_at, [np.pi]])
    levels = np.concatenate([[0.0], np.cumsum(jumps)])

    nodes = np.empty(node_count)
    piece = 0
    for i in range(1, node_count + 1):
        while True:
            base = levels[piece]
            if (np.pi + starts[piece]) / TWO_PI + base >= i:
                nodes[i - 1] = starts[piece]
                break
            crossing = TWO_PI * (i - base) - np.pi
            if crossing < ends[piece] or piece == len(starts) - 1:
                nodes[i - 1] = min(crossing, np.nextafter(np.pi, -np.inf))
                break
            piece += 1
    return nodes


def _zero_mean_poly(u: np.ndarray, total_mass: float, moments: np.ndarray) -> TrigPoly:
    """The polynomial x -> u . E(x), which integrates to zero against the weight."""
    return TrigPoly.from_arrays(np.concatenate([[-float(u @ moments)], total_mass * u[0::2]]), total_mass * u[1::2])


def _samples_support_hull(w: WeightSpec, n: int, node_count: int, samples: np.ndarray, options: FaithfulOptions) -> bool:
    points = moment_matrix(w, n, samples)
    moments = basis_moments(w, n)
    rng = np.random.default_rng(options.seed)
    for _ in range(options.support_checks):
        u = rng.standard_normal(2 * n)
        q = _zero_mean_poly(u, w.total_mass, moments)
        if not 2 * node_count * float(np.max(points @ u)) > l1_norm(q.derivative()):
            return False
    return True


def origin_depth(points: np.ndarray) -> float:
    """Largest t such that the origin is a convex combination of the points with every coefficient at least t."""
    count, dim = points.shape
    cost = np.zeros(count + 1)
    cost[-1] = -1.0
    a_ub = np.hstack([-np.eye(count), np.ones((count, 1))])
    a_eq = np.vstack([np.append(np.ones(count), 0.0), np.hstack([points.T, np.zeros((dim, 1))])])
    b_eq = np.append(1.0, np.zeros(dim))
    result = linprog(cost, A_ub=a_ub, b_ub=np.zeros(count), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * count + [(None, None)])
    if not result.success:
        return 0.0
    return float(result.x[-1])


def build_hull(w: WeightSpec, n: int, node_count: int, options: FaithfulOptions) -> SampledHull:
    """Sample set and hull satisfying the sampled covering inequality with the origin interior."""
    size = options.sample_factor * (2 * n + 1)
    for _ in range(options.max_doublings + 1):
        samples = -np.pi + TWO_PI * (np.arange(size) + 0.5) / size
        if not _samples_support_hull(w, n, node_count, samples, options):
            LOGGER(f"sampled covering inequality violated with {size} samples; doubling", level=logging.DEBUG)
            size *= 2
            continue
        points = moment_matrix(w, n, samples)
        if origin_depth(points) <= _INTERIOR_MARGIN:
            LOGGER(f"origin not interior with {size} samples; doubling", level=logging.DEBUG)
            size *= 2
            continue
        try:
            return SampledHull(samples, points)
        except QhullError as exc:
            LOGGER(f"hull construction failed with {size} samples: {exc}", level=logging.DEBUG)
            size *= 2
    LOGGER(exc_info=PreconditionError(f"no admissible sample set up to {size // 2} samples for {n=} N={node_count}"))
    raise AssertionError("unreachable")


class _SummedMoments:
    """v -> sum_j E(f_j(v)) / (I N) on the hull, extended to all of space by radial retraction."""

    def __init__(self, w: WeightSpec, n: int, node_count: int, hull: SampledHull) -> None:
        self.w = w
        self.n = n
        self.node_count = node_count
        self.hull = hull
        self.scale = w.total_mass * node_count

    def nodes(self, y: np.ndarray) -> np.ndarray:
        v = self.hull.retract(np.asarray(y, dtype=float))
        indices, alphas = self.hull.barycentric(v)
        return node_functions(self.hull.samples[indices], alphas, self.node_count)

    def __call__(self, y: np.ndarray) -> np.ndarray:
        return moment_matrix(self.w, self.n, self.nodes(y)).sum(axis=0) / self.scale

    def objective(self, y: np.ndarray) -> float:
        value = self(y)
        return float(value @ value)


def _search_from(system: _SummedMoments, start: np.ndarray, polish: MomentSystem, options: FaithfulOptions) -> np.ndarray:
    """Hull fixed point from `start`, then a damped least-squares polish of the nodes it maps to."""
    coarse = minimize(system.objective, start, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-24, "maxiter": 4000})
    rooted = root(system, coarse.x, method="hybr")
    y = min([coarse.x, rooted.x], key=system.objective)
    nodes = np.sort(system.nodes(y))
    # Coincident nodes share Jacobian columns and would move together, so they are spread apart first.
    nodes = nodes + _SPREAD * (TWO_PI / nodes.size) * np.linspace(-0.5, 0.5, nodes.size)
    polished, _ = damped_least_squares(polish, nodes, options.polish_iter, 0.1 * options.target)
    return polished


def _hull_starts(hull: SampledHull, n: int, options: FaithfulOptions, attempt: int) -> list[np.ndarray]:
    """The origin, vertices pulled halfway to the origin, and random convex combinations of the vertices."""
    picks = np.linspace(0, hull.vertices.shape[0] - 1, min(options.starts, hull.vertices.shape[0])).astype(int)
    starts = [np.zeros(2 * n), *(0.5 * hull.vertices[picks])]
    for rng in spawn_rngs(options.seed + attempt, options.starts):
        starts.append(rng.dirichlet(np.ones(hull.points.shape[0])) @ hull.points)
    return starts


@log_it
def kane_construct(w: WeightSpec, n: int, node_count: int, options: FaithfulOptions | None = None) -> Quadrature:
    """Equal-weight quadrature of degree n with `node_count` nodes, following the hull fixed-point construction.

    Raises
    ------
    PreconditionError
        If n exceeds `options.max_degree` or `node_count` does not exceed the node bound.
    ConvergenceError
        If no start of the root search verifies.
    """
    options = FaithfulOptions() if options is None else options
    if w.domain != Domain.CIRCLE:
        LOGGER(exc_info=PreconditionError("kane_construct requires a circle weight"))
    if not 1 <= n <= options.max_degree:
        LOGGER(exc_info=PreconditionError(f"{n=} outside 1..{options.max_degree}"))
    sup = kane_sup(w, n, options.kane).sup_estimate if options.sup_estimate is None else options.sup_estimate
    if not 2 * node_count > w.total_mass * sup:
        LOGGER(
            exc_info=PreconditionError(
                f"N={node_count} does not satisfy 2N > I * sup = {w.total_mass * sup:.6g}; existence is not guaranteed"
            )
        )

    polish = MomentSystem(w, n)
    best = np.inf
    for attempt in range(options.hull_widenings + 1):
        widened = options.model_copy(update={"sample_factor": options.sample_factor * 2**attempt})
        hull = build_hull(w, n, node_count, widened)
        system = _SummedMoments(w, n, node_count, hull)
        starts = _hull_starts(hull, n, options, attempt)
        tasks = [dask.delayed(_search_from)(system, start, polish, options) for start in starts]
        for index, nodes in enumerate(compute_ordered(tasks)):
            candidate = Quadrature(domain=Domain.CIRCLE, degree=n, nodes=tuple(nodes), weight=w.total_mass / node_count)
            report = verify(candidate, w, tol=options.target)
            best = min(best, report.max_residual)
            if report.accepted:
                LOGGER(f"faithful {n=} N={node_count}: start {index} of hull {attempt} verified at {report.max_residual:.3e}")
                return candidate
        LOGGER(f"hull with {hull.samples.size} samples stalled at {best:.3e}; widening", level=logging.DEBUG)
    LOGGER(exc_info=ConvergenceError(f"root search over the hull failed for {n=} N={node_count}", best_residual=best))
    raise AssertionError("unreachable")
