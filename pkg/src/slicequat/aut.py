"""Automorphism dimensions of Hopf quotients.

An automorphism lifts to an ordered series map ``Phi`` without constant term that
commutes with the generator ``f``. For ``p = 1`` the commutation equation is
linear in the coefficients of ``Phi`` and its solution space is assembled and
measured directly; for ``p > 1`` the equation is linearised at the identity,
``V(f(z, w)) = Df(z, w)[V(z, w)]``, and the tangent space is measured instead.
Both systems are sampled at random points and their nullity read off the
singular spectrum.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .hopf import HopfCase, HopfParams, apply_generator, classify, generator
from .quat_core import (
    ATOL,
    Quaternion,
    QuatLike,
    as_qarray,
    imaginary_unit,
    int_pow,
    left_matrix,
    qmul,
    qnorm,
    qpowers,
    random_quaternions,
    right_matrix,
    rotation_matrix,
    sandwich_matrix,
    slice_projection,
)
from .series import OrderedSeries, SeriesMap, compose_eval

DEFAULT_SV_TOL = 1e-8
SAMPLE_RMIN, SAMPLE_RMAX = 0.5, 1.5


class MethodError(ValueError):
    """Raised when a solver is used outside its range of validity."""


# ---------------------------------------------------------------------------
# coefficient vectors


def monomials(degree: int) -> list[tuple[int, int]]:
    """Exponents ``(h, k)`` with ``1 <= h + k <= degree``, grouped by total degree."""
    return [(h, d - h) for d in range(1, degree + 1) for h in range(d, -1, -1)]


def coefficient_dim(degree: int) -> int:
    return 2 * 4 * len(monomials(degree))


def vector_to_map(vec: np.ndarray, degree: int) -> SeriesMap:
    vec = np.asarray(vec, dtype=float)
    mons = monomials(degree)
    if vec.shape != (8 * len(mons),):
        raise ValueError(f"expected a vector of length {8 * len(mons)}, got {vec.shape}")
    blocks = vec.reshape(2, len(mons), 4)
    parts = []
    for comp in range(2):
        parts.append(
            OrderedSeries(degree, {m: blocks[comp, i] for i, m in enumerate(mons) if np.any(blocks[comp, i] != 0.0)})
        )
    return SeriesMap(*parts)


def map_to_vector(phi: SeriesMap) -> np.ndarray:
    mons = monomials(phi.degree)
    index = {m: i for i, m in enumerate(mons)}
    out = np.zeros((2, len(mons), 4))
    for comp, S in enumerate((phi.first, phi.second)):
        for key, c in S.coeffs.items():
            if key == (0, 0):
                if np.any(c != 0.0):
                    raise ValueError("automorphism ansatz has no constant term")
                continue
            out[comp, index[key]] = c
    return out.ravel()


# ---------------------------------------------------------------------------
# the two linear systems


def sample_points(samples: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    z = random_quaternions(rng, samples, SAMPLE_RMIN, SAMPLE_RMAX)
    w = random_quaternions(rng, samples, SAMPLE_RMIN, SAMPLE_RMAX)
    return z, w


def df_apply(params: HopfParams, z, w, v1, v2):
    """Derivative of ``f`` at ``(z, w)`` applied to ``(v1, v2)``.

    ``(v1 alpha + sum_{i+j=p-1} w^i v2 w^j lambda, v2 beta)``.
    """
    scalar = all(isinstance(q, Quaternion) for q in (z, w, v1, v2))
    z, w, v1, v2 = (as_qarray(q) for q in (z, w, v1, v2))
    p = params.p
    wp = qpowers(w, p - 1)
    acc = np.zeros(np.broadcast_shapes(w.shape, v2.shape))
    for i in range(p):
        acc = acc + qmul(qmul(wp[i], v2), wp[p - 1 - i])
    first = qmul(v1, params.alpha.array) + qmul(acc, params.lam.array)
    second = qmul(v2, params.beta.array)
    if scalar:
        return Quaternion.from_array(first), Quaternion.from_array(second)
    return first, second


def direct_residual(params: HopfParams, phi: SeriesMap, z, w):
    """``Phi(f(z, w)) - f(Phi(z, w))`` at the given points."""
    f = generator(params)
    l1, l2 = compose_eval(phi, f, z, w)
    r1, r2 = compose_eval(f, phi, z, w)
    return l1 - r1, l2 - r2


def linearized_residual(params: HopfParams, v: SeriesMap, z, w):
    """``V(f(z, w)) - Df(z, w)[V(z, w)]`` at the given points."""
    fz, fw = apply_generator(params, z, w)
    l1, l2 = v(fz, fw)
    v1, v2 = v(z, w)
    r1, r2 = df_apply(params, z, w, v1, v2)
    return l1 - r1, l2 - r2


def assemble_system(
    residual: Callable[[SeriesMap], tuple[np.ndarray, np.ndarray]], degree: int
) -> np.ndarray:
    """Real matrix of a linear residual map, one column per coefficient coordinate."""
    n = coefficient_dim(degree)
    cols = []
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        r1, r2 = residual(vector_to_map(e, degree))
        cols.append(np.concatenate([r1.ravel(), r2.ravel()]))
    return np.column_stack(cols)


def row_normalize(A: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(A, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return A / norms


# ---------------------------------------------------------------------------
# reports


@dataclass
class AutReport:
    params: HopfParams
    case: HopfCase
    method: str
    degree: int
    samples: int
    seed: int
    singular_values: np.ndarray
    nullity: int
    expected: frozenset[int]
    sv_gap: float
    sv_tol: float = DEFAULT_SV_TOL
    nullspace: np.ndarray | None = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return self.nullity in self.expected

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "case": str(self.case),
            "method": self.method,
            "degree": self.degree,
            "samples": self.samples,
            "seed": self.seed,
            "singular_values": [float(s) for s in self.singular_values],
            "nullity": self.nullity,
            "expected": sorted(self.expected),
            "sv_gap": float(self.sv_gap),
            "sv_tol": self.sv_tol,
            "pass": self.passed,
        }


def default_degree(params: HopfParams) -> int:
    return max(2, params.p) + 1


def _nullity_report(params, method, residual_of, degree, samples, seed, sv_tol) -> AutReport:
    case = classify(params).case
    if case is HopfCase.INVALID:
        raise ValueError(f"invalid Hopf parameters: {classify(params).reason}")
    degree = default_degree(params) if degree is None else degree
    n = coefficient_dim(degree)
    samples = 4 * n if samples is None else samples
    if 8 * samples < 2 * n:
        raise ValueError(f"underdetermined sampling: {samples} points for {n} unknowns")
    z, w = sample_points(samples, seed)
    A = row_normalize(assemble_system(lambda phi: residual_of(params, phi, z, w), degree))
    _, s, vt = np.linalg.svd(A, full_matrices=False)
    cutoff = sv_tol * s[0]
    nullity = int(np.sum(s < cutoff))
    rank = len(s) - nullity
    if nullity == 0 or rank == 0:
        gap = np.inf
    else:
        gap = s[rank - 1] / max(s[rank], np.finfo(float).tiny)
    return AutReport(
        params=params,
        case=case,
        method=method,
        degree=degree,
        samples=samples,
        seed=seed,
        singular_values=s,
        nullity=nullity,
        expected=expected_dimension(params),
        sv_gap=float(gap),
        sv_tol=sv_tol,
        nullspace=vt[rank:],
    )


def direct_system_nullity(
    params: HopfParams,
    degree: int | None = None,
    samples: int | None = None,
    seed: int = 0,
    sv_tol: float = DEFAULT_SV_TOL,
) -> AutReport:
    """Nullity of ``Phi -> Phi o f - f o Phi``; only linear (hence valid) for ``p = 1``."""
    if params.p != 1:
        raise MethodError("nonlinear system: the direct method needs p = 1, use the linearized method")
    return _nullity_report(params, "direct", direct_residual, degree, samples, seed, sv_tol)


def linearized_system_nullity(
    params: HopfParams,
    degree: int | None = None,
    samples: int | None = None,
    seed: int = 0,
    sv_tol: float = DEFAULT_SV_TOL,
) -> AutReport:
    """Dimension of the centraliser's tangent space at the identity."""
    if degree is not None and degree < params.p:
        raise ValueError("degree bound must be at least p")
    return _nullity_report(params, "linearized", linearized_residual, degree, samples, seed, sv_tol)


def aut_dimension(params: HopfParams, method: str = "auto", **kw) -> AutReport:
    if method == "auto":
        method = "direct" if params.p == 1 else "linearized"
    if method == "direct":
        return direct_system_nullity(params, **kw)
    if method == "linearized":
        return linearized_system_nullity(params, **kw)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# expected dimensions


def expected_dimension(params: HopfParams, atol: float = ATOL) -> frozenset[int]:
    """Dimension set predicted for ``dim_R Aut(X)`` case by case."""
    c = classify(params, atol)
    alpha, beta, lam = params.alpha, params.beta, params.lam
    ar, br = alpha.is_real(atol), beta.is_real(atol)
    if c.case is HopfCase.A1:
        return frozenset({16 if ar else 8})
    if c.case is HopfCase.A21:
        return frozenset({8 if ar and br else 6 if ar or br else 4})
    if c.case is HopfCase.A22:
        if ar and br:
            return frozenset({8})
        if ar or br:
            return frozenset({6, 8})
        return frozenset({8 if (alpha - beta.conj()).norm() <= atol else 4})
    if c.case is HopfCase.A3:
        if ar:
            return frozenset({8})
        along, perp = slice_projection(lam, imaginary_unit(alpha, atol))
        if perp.norm() <= atol:
            return frozenset({4})
        if along.norm() <= atol:
            return frozenset({8})
        return frozenset({4, 8})
    if c.case is HopfCase.B:
        return frozenset({5})
    raise ValueError(f"invalid Hopf parameters: {c.reason}")


# ---------------------------------------------------------------------------
# explicit families


def is_invertible_linear(a10: QuatLike, a01: QuatLike, b10: QuatLike, b01: QuatLike, tol: float = ATOL) -> bool:
    """Invertibility of ``(z, w) -> (z a10 + w a01, z b10 + w b01)``.

    Tests ``b01 (a10 - b10 b01^-1 a01) != 0`` or ``a01 (b10 - a10 a01^-1 b01) != 0``,
    skipping a branch whose pivot vanishes.
    """
    a10, a01, b10, b01 = (Quaternion.coerce(q) for q in (a10, a01, b10, b01))
    if b01.norm() > tol and (b01 * (a10 - b10 * b01.inverse() * a01)).norm() > tol:
        return True
    if a01.norm() > tol and (a01 * (b10 - a10 * a01.inverse() * b01)).norm() > tol:
        return True
    return False


def _commutes(a: Quaternion, b: Quaternion, tol: float) -> bool:
    return (a * b - b * a).norm() <= tol


def _intertwines(left: Quaternion, x: Quaternion, right: Quaternion, tol: float) -> bool:
    return (left * x - x * right).norm() <= tol


def a3_coefficient_matrix(params: HopfParams) -> np.ndarray:
    """16x16 real matrix of the degree-one A.3 equations in ``(a10, a01, b10, b01)``.

    Rows encode
    ``lambda a10 + alpha a01 = a01 alpha + b01 lambda``,
    ``alpha a10 = a10 alpha + b10 lambda``,
    ``lambda b10 + alpha b01 = b01 alpha`` and ``alpha b10 = b10 alpha``.
    """
    La, Ra = left_matrix(params.alpha), right_matrix(params.alpha)
    Ll, Rl = left_matrix(params.lam), right_matrix(params.lam)
    Z = np.zeros((4, 4))
    C = La - Ra
    return np.block(
        [
            [Ll, C, Z, -Rl],
            [C, Z, -Rl, Z],
            [Z, Z, Ll, C],
            [Z, Z, C, Z],
        ]
    )


def a3_solution_basis(params: HopfParams, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (rows) of solutions ``(a10, a01, b10, b01)`` of the A.3 equations."""
    _, s, vt = np.linalg.svd(a3_coefficient_matrix(params))
    rank = int(np.sum(s > tol * max(1.0, s[0])))
    return vt[rank:]


def _linear_map(degree: int, a10, a01, b10, b01) -> SeriesMap:
    return SeriesMap(
        OrderedSeries(degree, {(1, 0): a10, (0, 1): a01}),
        OrderedSeries(degree, {(1, 0): b10, (0, 1): b01}),
    )


def make_automorphism(params: HopfParams, tol: float = 1e-10, **free: QuatLike) -> SeriesMap:
    """Build a member of the explicit automorphism family for ``params``' case.

    Free parameters by case: A1, A22, A3 take ``a10, a01, b10, b01``; A21 takes
    ``a10, b01``; B takes a real non-zero ``b01`` and ``a0p``. Constraints and
    invertibility are validated and violations raise ``ValueError``.
    """
    case = classify(params).case
    alpha, beta, p = params.alpha, params.beta, params.p
    q = {name: Quaternion.coerce(v) for name, v in free.items()}

    def need(*names):
        missing = [n for n in names if n not in q]
        extra = sorted(set(q) - set(names))
        if missing or extra:
            raise ValueError(f"case {case} takes parameters {names}; missing {missing}, unexpected {extra}")
        return [q[n] for n in names]

    if case is HopfCase.A1:
        a10, a01, b10, b01 = need("a10", "a01", "b10", "b01")
        for name, c in zip(("a10", "a01", "b10", "b01"), (a10, a01, b10, b01)):
            if not _commutes(c, alpha, tol):
                raise ValueError(f"{name} must lie in the slice of alpha")
        if not is_invertible_linear(a10, a01, b10, b01):
            raise ValueError("parameters give a non-invertible map")
        return _linear_map(1, a10, a01, b10, b01)

    if case is HopfCase.A21:
        a10, b01 = need("a10", "b01")
        if not _commutes(a10, alpha, tol):
            raise ValueError("a10 must lie in the slice of alpha")
        if not _commutes(b01, beta, tol):
            raise ValueError("b01 must lie in the slice of beta")
        if (b01 * a10).norm() <= tol:
            raise ValueError("parameters give a non-invertible map")
        return _linear_map(1, a10, Quaternion(), Quaternion(), b01)

    if case is HopfCase.A22:
        a10, a01, b10, b01 = need("a10", "a01", "b10", "b01")
        checks = [
            (_commutes(a10, alpha, tol), "a10 must lie in the slice of alpha"),
            (_commutes(b01, beta, tol), "b01 must lie in the slice of beta"),
            (_intertwines(beta, a01, alpha, tol), "need beta a01 = a01 alpha"),
            (_intertwines(alpha, b10, beta, tol), "need alpha b10 = b10 beta"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ValueError(msg)
        if not is_invertible_linear(a10, a01, b10, b01):
            raise ValueError("parameters give a non-invertible map")
        return _linear_map(1, a10, a01, b10, b01)

    if case is HopfCase.A3:
        a10, a01, b10, b01 = need("a10", "a01", "b10", "b01")
        x = np.concatenate([c.array for c in (a10, a01, b10, b01)])
        if np.linalg.norm(a3_coefficient_matrix(params) @ x) > tol * max(1.0, np.linalg.norm(x)):
            raise ValueError("parameters violate the A.3 commutation equations")
        if not is_invertible_linear(a10, a01, b10, b01):
            raise ValueError("parameters give a non-invertible map")
        return _linear_map(1, a10, a01, b10, b01)

    if case is HopfCase.B:
        b01, a0p = need("b01", "a0p")
        if not b01.is_real(tol) or abs(b01.w) <= tol:
            raise ValueError("b01 must be a non-zero real number")
        return SeriesMap(
            OrderedSeries(p, {(1, 0): int_pow(b01, p), (0, p): a0p}),
            OrderedSeries(p, {(0, 1): b01}),
        )

    raise ValueError(f"invalid Hopf parameters: {classify(params).reason}")


def commutator_residual(params: HopfParams, phi: SeriesMap, samples: int = 100, seed: int = 0) -> float:
    """Largest ``||Phi(f(x)) - f(Phi(x))||`` over random sample points."""
    z, w = sample_points(samples, seed)
    d1, d2 = direct_residual(params, phi, z, w)
    return float(np.max(np.sqrt(qnorm(d1) ** 2 + qnorm(d2) ** 2)))


# ---------------------------------------------------------------------------
# fixed sets of roto-translations


class FixedSetKind(enum.Enum):
    EMPTY = "empty"
    POINT = "point"
    PLANE = "plane"
    ALL = "all"
    AFFINE = "affine"


@dataclass(frozen=True)
class FixedSet:
    kind: FixedSetKind
    point: Quaternion | None = None
    basis: tuple[Quaternion, ...] = ()

    @property
    def dimension(self) -> int:
        return -1 if self.kind is FixedSetKind.EMPTY else len(self.basis)

    def contains(self, x: QuatLike, tol: float = 1e-10) -> bool:
        if self.kind is FixedSetKind.EMPTY:
            return False
        d = as_qarray(x) - self.point.array
        if self.basis:
            B = np.array([b.array for b in self.basis])
            d = d - B.T @ (B @ d)
        return float(np.linalg.norm(d)) <= tol


def rotation_translation_fixed_set(
    q: QuatLike, c: QuatLike = 0.0, q2: QuatLike | None = None, tol: float = 1e-10
) -> FixedSet:
    """Fixed points of ``X -> q X q^-1 + c`` (or ``X -> q X q2^-1 + c`` when ``q2`` is given)."""
    q = Quaternion.coerce(q)
    if q.norm() == 0.0:
        raise ZeroDivisionError("q must be non-zero")
    M = rotation_matrix(q) if q2 is None else sandwich_matrix(q, q2)
    A = np.eye(4) - M
    cv = as_qarray(c)
    _, s, vt = np.linalg.svd(A)
    rank = int(np.sum(s > tol * max(1.0, s[0])))
    x, *_ = np.linalg.lstsq(A, cv, rcond=None)
    if np.linalg.norm(A @ x - cv) > tol * (1.0 + np.linalg.norm(cv)):
        return FixedSet(FixedSetKind.EMPTY)
    null = vt[rank:]
    # minimum-norm representative
    x = x - null.T @ (null @ x)
    basis = tuple(Quaternion.from_array(v) for v in null)
    kind = {0: FixedSetKind.POINT, 2: FixedSetKind.PLANE, 4: FixedSetKind.ALL}.get(len(basis), FixedSetKind.AFFINE)
    return FixedSet(kind, Quaternion.from_array(x), basis)


def fixed_space_dimension(q1: QuatLike, q2: QuatLike, tol: float = 1e-10) -> int:
    """``dim {X : q1 X = X q2}``."""
    A = left_matrix(q1) - right_matrix(q2)
    s = np.linalg.svd(A, compute_uv=False)
    scale = max(Quaternion.coerce(q1).norm(), Quaternion.coerce(q2).norm(), 1e-300)
    return int(np.sum(s <= tol * scale))
