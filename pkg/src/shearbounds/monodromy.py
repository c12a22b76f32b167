"""Monodromy-matrix bounds on the effective shear modulus.

The cross-section problem is the first-order system ``dw/dx1 = Q(x1) w`` with

    Q = [[0, T^{-1}], [D T D, 0]],   D = 2 pi diag(-N..N),

where ``T`` is the truncated Toeplitz cross-section operator.  Its
multiplicative integral over one period (or half a period for fields even
in x1) yields the bound.

Entries of the monodromy matrix grow like ``exp(sum |dx| sqrt(lambda_max))``
and the full-period resolvent solve loses about twice that many digits, so
the solves run in ball arithmetic (python-flint) with a working precision
picked from that growth estimate.  The half-period solve is far better
conditioned and stays in float64 unless the growth is extreme.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable

import flint
import numpy as np
import scipy.linalg

from . import _hp
from .cell import CellField, invert_field
from .fourier import ToeplitzProfile, cross_section_profile, toeplitz_inverse
from .pwe import NonCubicField

__all__ = [
    "BlockHamiltonian",
    "TransferMatrix",
    "MonodromyBound",
    "ResolventBreakdown",
    "build_Q",
    "monodromy_piecewise_exp",
    "monodromy_product",
    "monodromy_peano",
    "transfer_residuals",
    "log_growth",
    "auto_precision",
    "full_period_value",
    "half_period_value",
    "mm_bound",
    "mm_upper_mu",
    "mm_lower_mu",
    "mm_upper_mu_half",
    "BACKENDS",
]

BACKENDS = ("piecewise_exp", "product", "peano")

# float64 full-period solves are trusted while this many digits are lost
FULL_PERIOD_FLOAT_DIGITS = 3.0
HALF_PERIOD_FLOAT_DIGITS = 14.0
PEANO_TOL = 1e-16
MAX_PEANO_SUBSTEPS = 2_000_000


class ResolventBreakdown(ArithmeticError):
    """The bordered resolvent system or the half-period block is singular."""


def _derivative(N: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(-N, N + 1, dtype=float)


@dataclass(frozen=True, eq=False)
class BlockHamiltonian:
    """``Q(x1)`` stored per profile segment.

    ``Q[k]`` is the generator on ``[edges[k], edges[k+1])``; ``A[k]`` and
    ``B[k]`` are its upper-right and lower-left blocks.  The profile is
    kept so that extended-precision paths can rebuild the blocks.
    """

    N: int
    profile: ToeplitzProfile
    A: np.ndarray
    B: np.ndarray

    @property
    def edges(self) -> np.ndarray:
        return self.profile.edges

    @property
    def size(self) -> int:
        return 2 * (2 * self.N + 1)

    @property
    def Q(self) -> np.ndarray:
        n = 2 * self.N + 1
        out = np.zeros((len(self.A), 2 * n, 2 * n), dtype=np.result_type(self.A, self.B))
        out[:, :n, n:] = self.A
        out[:, n:, :n] = self.B
        return out

    def segment_at(self, x: float) -> int:
        return self.profile.segment_at(x)

    def scaling(self) -> float:
        """``s`` such that ``diag(I, I/s) Q diag(I, s I)`` has balanced blocks."""
        a = max(float(np.max(np.abs(a))) for a in self.A)
        b = max(float(np.max(np.abs(b))) for b in self.B)
        if a == 0.0 or b == 0.0:
            return 1.0
        return math.sqrt(b / a)


def build_Q(profile: ToeplitzProfile) -> BlockHamiltonian:
    """Assemble the generator blocks for every profile segment."""
    N = profile.N
    d = _derivative(N)
    A, B = [], []
    for k in range(profile.n_segments):
        T = profile.block(k)
        A.append(toeplitz_inverse(T))
        b = d[:, None] * T * d[None, :]
        B.append(0.5 * (b + b.conj().T))
    return BlockHamiltonian(N, profile, np.array(A), np.array(B))


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    """Multiplicative integral of ``Q`` over ``interval``.

    ``exact`` holds the ball-arithmetic matrix when the integral was
    computed in extended precision; ``matrix`` is always its float64 image.
    """

    N: int
    interval: tuple[float, float]
    matrix: np.ndarray
    integrator: str
    exact: object = None
    precision: int | None = None
    steps: int | None = None


def _pieces(H: BlockHamiltonian, interval) -> list[tuple[int, float]]:
    """(segment, length) pairs covering ``interval`` left to right."""
    lo, hi = map(float, interval)
    edges = H.edges
    if not (edges[0] <= lo <= hi <= edges[-1]):
        raise ValueError(f"interval [{lo}, {hi}] is not inside [{edges[0]}, {edges[-1]}]")
    out = []
    for k in range(len(edges) - 1):
        a, b = max(lo, edges[k]), min(hi, edges[k + 1])
        if b > a:
            out.append((k, b - a))
    return out


def _merged_pieces(H: BlockHamiltonian, interval) -> list[tuple[int, float]]:
    """Like :func:`_pieces` with neighbours carrying the same generator joined."""
    out: list[list] = []
    coeffs = H.profile.coeffs
    for k, length in _pieces(H, interval):
        if out and np.array_equal(coeffs[out[-1][0]], coeffs[k]):
            out[-1][1] += length
        else:
            out.append([k, length])
    return [(k, length) for k, length in out]


def _is_complex(H: BlockHamiltonian) -> bool:
    return np.iscomplexobj(H.A) or np.iscomplexobj(H.B)


def _hp_blocks(H: BlockHamiltonian, complex_: bool) -> Callable[[int], tuple]:
    """Per-segment (A, B) in ball arithmetic, built from the Toeplitz data."""
    d = [_hp.two_pi() * n for n in range(-H.N, H.N + 1)]
    dmat = (flint.acb_mat if complex_ else flint.arb_mat)(
        len(d), len(d), [d[i] if i == j else 0 for i in range(len(d)) for j in range(len(d))]
    )
    cache: dict[int, tuple] = {}

    def get(k: int):
        if k not in cache:
            T = _hp.from_numpy(H.profile.block(k), complex_)
            A = _hp.symmetrize(T.inv())
            B = dmat * T * dmat
            cache[k] = (A, B)
        return cache[k]

    return get


def _hp_generator(A, B, scale=1):
    n = A.nrows()
    cls = type(A)
    Z = cls(n, n)
    rows = [a + b for a, b in zip(Z.tolist(), (A * scale).tolist())]
    rows += [a + b for a, b in zip((B * scale).tolist(), Z.tolist())]
    return cls(rows)


def monodromy_piecewise_exp(
    H: BlockHamiltonian, interval=(0.0, 1.0), precision: int | None = None
) -> TransferMatrix:
    """``exp(|D_n| Q_n) ... exp(|D_1| Q_1)`` over the segments in ``interval``."""
    pieces = _pieces(H, interval)
    interval = (float(interval[0]), float(interval[1]))
    size = H.size
    if precision is None:
        Q = H.Q
        M = np.eye(size, dtype=Q.dtype)
        for k, length in pieces:
            M = scipy.linalg.expm(length * Q[k]) @ M
        return TransferMatrix(H.N, interval, M, "piecewise_exp", steps=len(pieces))
    cplx = _is_complex(H)
    with _hp.working_precision(precision):
        blocks = _hp_blocks(H, cplx)
        M = _hp.identity(size, cplx)
        for k, length in pieces:
            A, B = blocks(k)
            M = (_hp_generator(A, B, flint.arb(length))).exp() * M
        return TransferMatrix(H.N, interval, _hp.to_numpy(M), "piecewise_exp", M, precision, len(pieces))


def monodromy_product(
    H: BlockHamiltonian, interval=(0.0, 1.0), steps: int = 1, precision: int | None = None
) -> TransferMatrix:
    """First-order product ``prod_j (I + h Q(x_j))`` with ``x_j = alpha + j h``.

    ``Q`` is sampled at the left end of each step, using the half-open
    segment convention.  Runs of steps that see the same segment are
    raised to a power instead of multiplied one by one.
    """
    if int(steps) != steps or steps < 1:
        raise ValueError(f"step count must be a positive integer, got {steps}")
    steps = int(steps)
    lo, hi = float(interval[0]), float(interval[1])
    _pieces(H, (lo, hi))
    h = (hi - lo) / steps
    seg = [H.segment_at(lo + j * h) for j in range(steps)]
    runs: list[list[int]] = []
    for k in seg:
        if runs and runs[-1][0] == k:
            runs[-1][1] += 1
        else:
            runs.append([k, 1])
    size = H.size
    if precision is None:
        Q = H.Q
        I = np.eye(size, dtype=Q.dtype)
        M = I.copy()
        for k, count in runs:
            M = np.linalg.matrix_power(I + h * Q[k], count) @ M
        return TransferMatrix(H.N, (lo, hi), M, "product", steps=steps)
    cplx = _is_complex(H)
    with _hp.working_precision(precision):
        blocks = _hp_blocks(H, cplx)
        I = _hp.identity(size, cplx)
        M = I
        hb = flint.arb(hi - lo) / steps
        for k, count in runs:
            A, B = blocks(k)
            M = (I + _hp_generator(A, B, hb)) ** count * M
        return TransferMatrix(H.N, (lo, hi), _hp.to_numpy(M), "product", M, precision, steps)


def _peano_theta(order: int) -> float:
    # largest ||hQ|| whose Taylor tail after `order` terms stays below PEANO_TOL
    return min(1.0, (math.factorial(order + 1) * PEANO_TOL) ** (1.0 / (order + 1)))


def monodromy_peano(
    H: BlockHamiltonian,
    interval=(0.0, 1.0),
    order: int = 8,
    precision: int | None = None,
    substeps: int | str = "auto",
) -> TransferMatrix:
    """Peano series truncated after ``order`` iterated integrals.

    On a sub-step of length ``h`` where ``Q`` is constant the ``j``-fold
    iterated integral is exactly ``(hQ)^j / j!``, so the composite rule is
    a truncated series per sub-step.  With ``substeps="auto"`` each segment
    is split so that ``||hQ||`` keeps the truncation tail near machine
    precision, unless ``Q`` is nilpotent within ``order`` terms and the
    series is already exact; an integer fixes the number of sub-steps per segment (``1``
    gives the plain truncated series).
    """
    if int(order) != order or order < 1:
        raise ValueError(f"series order must be a positive integer, got {order}")
    order = int(order)
    pieces = _merged_pieces(H, interval)
    interval = (float(interval[0]), float(interval[1]))
    s = H.scaling()
    n = 2 * H.N + 1
    size = H.size
    # balanced generator: S Q S^{-1} with S = diag(I, I/s)
    Qb = H.Q.copy()
    Qb[:, :n, n:] *= s
    Qb[:, n:, :n] /= s
    theta = _peano_theta(order)
    counts = []
    for k, length in pieces:
        if substeps == "auto" and _truncation_exact(Qb[k], order):
            m = 1
        elif substeps == "auto":
            norm = float(np.linalg.norm(Qb[k], 2)) * length
            m = max(1, math.ceil(norm / theta))
            if m > MAX_PEANO_SUBSTEPS:
                raise ValueError(f"order {order} needs {m} sub-steps on one segment; raise the order")
        else:
            m = int(substeps)
            if m < 1:
                raise ValueError("substeps must be positive")
        counts.append(m)
    total = sum(counts)
    if precision is None:
        I = np.eye(size, dtype=Qb.dtype)
        Mb = I.copy()
        for (k, length), m in zip(pieces, counts):
            hQ = (length / m) * Qb[k]
            E = I.copy()
            for j in range(order, 0, -1):
                E = I + (hQ @ E) / j
            Mb = np.linalg.matrix_power(E, m) @ Mb
        Sinv = np.concatenate([np.ones(n), np.full(n, s)])
        M = Sinv[:, None] * Mb / Sinv[None, :]
        return TransferMatrix(H.N, interval, M, "peano", steps=total)
    cplx = _is_complex(H)
    with _hp.working_precision(precision):
        blocks = _hp_blocks(H, cplx)
        I = _hp.identity(size, cplx)
        sb = flint.arb(s)
        M = I
        for (k, length), m in zip(pieces, counts):
            A, B = blocks(k)
            h = flint.arb(length) / m
            hQ = _hp_generator(A * sb, B / sb, h)
            E = I
            for j in range(order, 0, -1):
                E = I + hQ * E / j
            # undo the balancing on each factor: S^{-1} E S
            M = _unbalance(E, sb, n) ** m * M
        return TransferMatrix(H.N, interval, _hp.to_numpy(M), "peano", M, precision, total)


def _truncation_exact(Q: np.ndarray, order: int) -> bool:
    # Q^(order+1) = 0 means the series terminates within the kept terms
    P = Q
    for _ in range(order):
        P = P @ Q
        if not P.any():
            return True
    return False


def _unbalance(E, s, n):
    rows = E.tolist()
    cls = type(E)
    out = []
    for i, row in enumerate(rows):
        fi = 1 if i < n else s
        out.append([v * fi / (1 if j < n else s) for j, v in enumerate(row)])
    return cls(out)


def _J(n: int) -> np.ndarray:
    I = np.eye(n)
    Z = np.zeros((n, n))
    return np.block([[Z, I], [-I, Z]])


def transfer_residuals(tm: TransferMatrix) -> dict:
    """Deviations from the structural identities of a monodromy matrix.

    ``det_error`` is ``|det M - 1|``; ``w1_error`` and ``w2_error`` are the
    max-norm residuals of ``M w1 = w1`` and ``w2* M = w2*``;
    ``symplectic_error`` is ``max|M* J M - J| / max|M|^2``.
    """
    n = 2 * tm.N + 1
    c = tm.N
    if tm.exact is not None:
        with _hp.working_precision(tm.precision):
            M = tm.exact
            cplx = _hp.is_complex(M)
            det = M.det()
            det_error = float(abs(det - 1).mid())
            J = _hp.from_numpy(_J(n), cplx)
            sym = _hp.max_abs(_hp.adjoint(M) * J * M - J)
            scale = _hp.max_abs(M)
            rows = M.tolist()
            w1 = max(abs(float(abs(rows[i][c] - (1 if i == c else 0)).mid())) for i in range(2 * n))
            w2 = max(abs(float(abs(rows[n + c][j] - (1 if j == n + c else 0)).mid())) for j in range(2 * n))
    else:
        M = tm.matrix
        sign, logdet = np.linalg.slogdet(M)
        det_error = float(abs(sign * np.exp(logdet) - 1.0))
        J = _J(n)
        sym = float(np.max(np.abs(M.conj().T @ J @ M - J)))
        scale = float(np.max(np.abs(M)))
        e1 = np.zeros(2 * n)
        e1[c] = 1.0
        e2 = np.zeros(2 * n)
        e2[n + c] = 1.0
        w1 = float(np.max(np.abs(M @ e1 - e1)))
        w2 = float(np.max(np.abs(e2 @ M - e2)))
    return {
        "det_error": det_error,
        "w1_error": w1,
        "w2_error": w2,
        "symplectic_error": sym / max(scale, 1.0) ** 2,
    }


def log_growth(H: BlockHamiltonian, interval) -> float:
    """Natural-log estimate of the entry growth of the transfer matrix.

    Each segment contributes ``length * sqrt(lambda_max(T^{-1} D T D))``,
    the fastest exponential rate of the frozen-coefficient system.
    """
    total = 0.0
    rates: dict[int, float] = {}
    for k, length in _pieces(H, interval):
        if k not in rates:
            if H.N == 0:
                rates[k] = 0.0
            else:
                T = H.profile.block(k)
                lam = scipy.linalg.eigvalsh(H.B[k], T, subset_by_index=[T.shape[0] - 1, T.shape[0] - 1])
                rates[k] = math.sqrt(max(float(lam[-1]), 0.0))
        total += length * rates[k]
    return total


def auto_precision(H: BlockHamiltonian, interval, half_period: bool) -> int | None:
    """Working precision in bits for the solve, or ``None`` for float64."""
    g = log_growth(H, interval)
    digits = 2.0 * g / math.log(10.0)
    limit = HALF_PERIOD_FLOAT_DIGITS if half_period else FULL_PERIOD_FLOAT_DIGITS
    if digits <= limit:
        return None
    bits = 2.0 * g / math.log(2.0) + 128.0
    return int(64 * math.ceil(bits / 64.0))


@dataclass(frozen=True)
class ResolventValue:
    value: float
    condition_estimate: float


def full_period_value(tm: TransferMatrix) -> ResolventValue:
    """``w2 . x`` with ``(M - I) x = w1``.

    ``M - I`` has the one-dimensional kernel ``w1`` and co-kernel ``w2``;
    the bordered system ``[[M - I, w2], [w1^T, 0]]`` is then nonsingular and
    its solution fixes the gauge ``w1 . x = 0``.
    """
    n = 2 * tm.N + 1
    c = tm.N
    size = 2 * n
    if tm.exact is not None:
        with _hp.working_precision(tm.precision):
            M = tm.exact
            cplx = _hp.is_complex(M)
            rows = (M - _hp.identity(size, cplx)).tolist()
            K = [row + [1 if i == n + c else 0] for i, row in enumerate(rows)]
            K.append([1 if j == c else 0 for j in range(size + 1)])
            Kmat = type(M)(K)
            rhs = _hp.column([1 if i == c else 0 for i in range(size + 1)], cplx)
            try:
                x = Kmat.solve(rhs)
            except ZeroDivisionError as exc:
                raise ResolventBreakdown("bordered resolvent system is singular at this precision") from exc
            value = x[n + c, 0]
            if cplx:
                value = value.real
            if not value.rad() < 1e-10 * abs(value.mid()):
                raise ResolventBreakdown(f"resolvent value not resolved at {tm.precision} bits")
            cond = _condition_estimate(_hp.to_numpy(Kmat))
            return ResolventValue(float(value.mid()), cond)
    K = np.zeros((size + 1, size + 1), dtype=tm.matrix.dtype)
    K[:size, :size] = tm.matrix - np.eye(size)
    K[n + c, size] = 1.0
    K[size, c] = 1.0
    rhs = np.zeros(size + 1, dtype=K.dtype)
    rhs[c] = 1.0
    try:
        x = np.linalg.solve(K, rhs)
    except np.linalg.LinAlgError as exc:
        raise ResolventBreakdown(f"bordered resolvent system is singular: {exc}") from exc
    return ResolventValue(float(np.real(x[n + c])), _condition_estimate(K))


def half_period_value(tm: TransferMatrix) -> ResolventValue:
    """``1/2 e . m^{-1} e`` with ``m`` the upper-right block of ``M[1/2, 0]``."""
    n = 2 * tm.N + 1
    c = tm.N
    if tm.exact is not None:
        with _hp.working_precision(tm.precision):
            m = _hp.block(tm.exact, slice(0, n), slice(n, 2 * n))
            cplx = _hp.is_complex(m)
            rhs = _hp.column([1 if i == c else 0 for i in range(n)], cplx)
            try:
                y = m.solve(rhs)
            except ZeroDivisionError as exc:
                raise ResolventBreakdown("half-period block is singular at this precision") from exc
            value = y[c, 0].real if cplx else y[c, 0]
            if not value.rad() < 1e-10 * abs(value.mid()):
                raise ResolventBreakdown(f"half-period value not resolved at {tm.precision} bits")
            return ResolventValue(0.5 * float(value.mid()), _condition_estimate(_hp.to_numpy(m)))
    m = tm.matrix[:n, n:]
    e = np.zeros(n, dtype=m.dtype)
    e[c] = 1.0
    try:
        y = np.linalg.solve(m, e)
    except np.linalg.LinAlgError as exc:
        raise ResolventBreakdown(f"half-period block is singular: {exc}") from exc
    return ResolventValue(0.5 * float(np.real(y[c])), _condition_estimate(m))


def _condition_estimate(a: np.ndarray) -> float:
    with np.errstate(all="ignore"):
        c = float(np.linalg.cond(a))
    return c if math.isfinite(c) else math.inf


@dataclass(frozen=True)
class MonodromyBound:
    """Upper-bound value with diagnostics."""

    value: float
    N: int
    backend: str
    half_period: bool
    precision: int | None
    condition_estimate: float
    steps: int | None
    profile_steps: int | None
    converged: bool
    history: tuple = dc_field(default=())


def _resolve_backend(backend: str) -> str:
    if backend == "auto":
        return "piecewise_exp"
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; expected one of {('auto',) + BACKENDS}")
    return backend


def _integrate(H, interval, backend, steps, order, precision):
    if backend == "piecewise_exp":
        return monodromy_piecewise_exp(H, interval, precision)
    if backend == "product":
        k = max(1, round(steps * (interval[1] - interval[0])))
        return monodromy_product(H, interval, k, precision)
    return monodromy_peano(H, interval, order, precision)


def _evaluate(field, N, backend, half, precision, steps, order, profile_steps, level):
    lo, hi = field.mu_bounds()
    s = math.sqrt(lo * hi)
    profile = cross_section_profile(field, N, profile_steps, level).scaled(1.0 / s)
    H = build_Q(profile)
    interval = (0.0, 0.5) if half else (0.0, 1.0)
    bits = auto_precision(H, interval, half) if precision == "auto" else precision
    tm = _integrate(H, interval, backend, steps, order, bits)
    res = half_period_value(tm) if half else full_period_value(tm)
    return res.value * s, res, tm


def mm_bound(
    field: CellField,
    N: int,
    backend: str = "auto",
    *,
    half_period: bool | None = None,
    precision: int | str | None = "auto",
    steps: int | None = None,
    peano_order: int = 8,
    profile_steps: int = 64,
    refine_tol: float | None = 1e-8,
    max_profile_steps: int = 4096,
    max_product_steps: int = 1 << 17,
    oracle_mode: bool = False,
) -> MonodromyBound:
    """Upper bound ``mu_N`` with diagnostics.

    ``half_period`` defaults to the field's ``even_x1`` flag.  ``precision``
    is ``"auto"``, ``None`` (float64) or a bit count.  ``steps`` is the
    product-rule step count per unit length; when omitted it starts at 1024
    and doubles.  Stepped (disc) profiles are refined the same way, starting
    at ``profile_steps`` per unit length.  While refining, successive values
    are Richardson-extrapolated with the known convergence order and the
    loop stops once two extrapolated values agree to ``refine_tol``;
    ``history`` keeps the raw values.
    The field is normalized by ``sqrt(min mu * max mu)`` before integration.
    """
    if not (oracle_mode or field.symmetry.cubic):
        raise NonCubicField("bounds require a cubic-symmetric field (use oracle_mode for e1-only checks)")
    if int(N) != N or N < 0:
        raise ValueError(f"truncation order must be a non-negative integer, got {N}")
    N = int(N)
    backend = _resolve_backend(backend)
    if half_period is None:
        half_period = field.symmetry.even_x1
    elif half_period and not field.symmetry.even_x1:
        raise ValueError("half-period evaluation requires a field even in x1")
    if steps is not None and steps < 1:
        raise ValueError("steps must be positive")

    refine_profile = field.is_smooth_in_x1 and refine_tol is not None
    refine_steps = backend == "product" and steps is None and refine_tol is not None
    # stepped profiles converge at second order, the product rule at first
    rate = 2.0 if (refine_profile and not refine_steps) else 1.0
    level = 0
    k = steps if steps is not None else 1024
    history = []
    estimate = prev_estimate = None
    converged = True
    while True:
        value, res, tm = _evaluate(field, N, backend, half_period, precision, k, peano_order, profile_steps, level)
        if history:
            estimate = value + (value - history[-1]) / (2.0**rate - 1.0)
        history.append(value)
        if not (refine_profile or refine_steps):
            estimate = value
            break
        if prev_estimate is not None and abs(estimate - prev_estimate) <= refine_tol * abs(estimate):
            break
        next_level = level + 1 if refine_profile else level
        next_k = 2 * k if refine_steps else k
        if (refine_profile and profile_steps << next_level > max_profile_steps) or (
            refine_steps and next_k > max_product_steps
        ):
            converged = False
            break
        level, k, prev_estimate = next_level, next_k, estimate
    if estimate is None:
        estimate = value
    return MonodromyBound(
        value=estimate,
        N=N,
        backend=backend,
        half_period=half_period,
        precision=tm.precision,
        condition_estimate=res.condition_estimate,
        steps=tm.steps,
        profile_steps=(profile_steps << level) if field.is_smooth_in_x1 else None,
        converged=converged,
        history=tuple(history),
    )


def mm_upper_mu(field: CellField, N: int, backend: str = "auto", **options) -> float:
    """Monodromy upper bound ``mu_N``; see :func:`mm_bound` for options."""
    return mm_bound(field, N, backend, **options).value


def mm_lower_mu(field: CellField, N: int, backend: str = "auto", **options) -> float:
    """Lower bound: reciprocal of the upper bound of the inverted field."""
    oracle = options.get("oracle_mode", False)
    if not (oracle or field.symmetry.cubic):
        raise NonCubicField("bounds require a cubic-symmetric field (use oracle_mode for e1-only checks)")
    return 1.0 / mm_upper_mu(invert_field(field), N, backend, **options)


def mm_upper_mu_half(field: CellField, N: int, backend: str = "auto", **options) -> float:
    """Half-period evaluation of ``mu_N``; the field must be even in x1."""
    if not field.symmetry.even_x1:
        raise ValueError("half-period evaluation requires a field even in x1")
    options["half_period"] = True
    return mm_upper_mu(field, N, backend, **options)
