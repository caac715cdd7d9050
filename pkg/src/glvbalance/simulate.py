"""Trajectories in log coordinates with Lyapunov and conservation diagnostics.

Integration runs on ``xi = log x`` with the Dormand-Prince 5(4) pair, so
states stay positive by construction and the conservation laws
``<w, xi(t) - xi(0)> = 0`` for ``w`` orthogonal to ``D S`` are linear.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from ._dopri import CONVERGED, STEP_LIMIT, STEP_UNDERFLOW, integrate_log
from .balance import BalanceCertificate, StiemkeCertificate, state_in_class
from .dynamics import EXP_LIMIT, GlvSystem, ScaledSystem, _positive_state
from .egraph import EGraph, SubspaceBasis, kirchhoff_matrix, span_basis, stoichiometric_basis
from .errors import Overflow, StepUnderflow, ValidationError

H_MIN = 1e-14
CONVERGENCE_TOL = 1e-9
LYAPUNOV_SLACK = 1e-9


class LogField:
    """``dxi/dt = G @ exp(Yt @ xi)``: the common form of every field integrated here."""

    def __init__(self, G: np.ndarray, Yt: np.ndarray, d: np.ndarray, invariant: SubspaceBasis):
        self.G = np.ascontiguousarray(G, dtype=float)
        self.Yt = np.ascontiguousarray(Yt, dtype=float)
        self.d = np.asarray(d, dtype=float)
        self.invariant = invariant

    @classmethod
    def from_scaled(cls, sys: ScaledSystem, basis: SubspaceBasis | None = None) -> "LogField":
        g = sys.graph
        used = np.unique(g.sources)
        A = kirchhoff_matrix(g)
        G = sys.d[:, None] * (g.vertices.T @ A[:, used])
        basis = basis if basis is not None else stoichiometric_basis(g)
        return cls(G, g.vertices[used], sys.d, basis.scaled(sys.d))

    @classmethod
    def from_system(cls, sys: GlvSystem) -> "LogField":
        n = sys.dimension
        return cls(sys.coeffs.T, sys.exponents, np.ones(n), span_basis(sys.coeffs, n))

    @property
    def dimension(self) -> int:
        return self.G.shape[0]

    def __call__(self, xi: np.ndarray) -> np.ndarray:
        arg = self.Yt @ xi
        if arg.size and arg.max() > EXP_LIMIT:
            raise Overflow(float(arg.max()), EXP_LIMIT)
        return self.G @ np.exp(arg)


@dataclass
class Trajectory:
    """Accepted integration steps with diagnostics attached.

    Attributes:
        times: strictly increasing sample times.
        states_log: ``(K, n)`` log-states ``xi(t)``.
        derivatives: ``(K, n)`` values of ``dxi/dt`` (used for Hermite resampling).
        lyapunov: ``sum (xi - zeta)^2 / d`` against the in-class steady state
            ``zeta`` when a certificate was supplied, else ``None``.
        conservation: ``(K, k)`` residuals ``<w, xi(t) - xi(0)>`` for an
            orthonormal basis ``w`` of ``(D S)^perp``.
        converged_to: ``xi`` at which the convergence detector fired.
        reference: ``zeta`` used for the Lyapunov values.
    """

    times: np.ndarray
    states_log: np.ndarray
    derivatives: np.ndarray
    conservation: np.ndarray
    d: np.ndarray
    lyapunov: np.ndarray | None = None
    converged_to: np.ndarray | None = None
    reference: np.ndarray | None = None
    conservation_basis: np.ndarray = field(default=None, repr=False)

    @property
    def states(self) -> np.ndarray:
        return np.exp(self.states_log)

    @property
    def final_log(self) -> np.ndarray:
        return self.states_log[-1]

    @property
    def final(self) -> np.ndarray:
        return np.exp(self.states_log[-1])

    def __len__(self):
        return self.times.size

    def max_conservation_residual(self) -> float:
        return float(np.max(np.abs(self.conservation))) if self.conservation.size else 0.0

    def lyapunov_violation(self) -> float:
        """Largest single-step increase of the Lyapunov values (0 if monotone)."""
        if self.lyapunov is None or self.lyapunov.size < 2:
            return 0.0
        return float(max(0.0, np.max(np.diff(self.lyapunov))))

    def lyapunov_nonincreasing(self, slack: float = LYAPUNOV_SLACK) -> bool:
        if self.lyapunov is None:
            raise ValueError("trajectory carries no Lyapunov values")
        return self.lyapunov_violation() <= slack * (1.0 + abs(self.lyapunov[0]))

    def sample(self, times) -> "Trajectory":
        """Cubic Hermite interpolation of the accepted steps at ``times``."""
        times = np.asarray(times, dtype=float)
        if times.size and (times.min() < self.times[0] or times.max() > self.times[-1]):
            raise ValueError("sample times fall outside the integrated interval")
        k = np.clip(np.searchsorted(self.times, times, side="right") - 1, 0, max(self.times.size - 2, 0))
        if self.times.size == 1:
            xi = np.repeat(self.states_log, times.size, axis=0)
            f = np.repeat(self.derivatives, times.size, axis=0)
        else:
            t0, t1 = self.times[k], self.times[k + 1]
            h = (t1 - t0)[:, None]
            s = ((times - t0) / (t1 - t0))[:, None]
            y0, y1 = self.states_log[k], self.states_log[k + 1]
            f0, f1 = self.derivatives[k], self.derivatives[k + 1]
            h00 = 2 * s**3 - 3 * s**2 + 1
            h10 = s**3 - 2 * s**2 + s
            h01 = -2 * s**3 + 3 * s**2
            h11 = s**3 - s**2
            xi = h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1
            dh00 = (6 * s**2 - 6 * s) / h
            dh10 = 3 * s**2 - 4 * s + 1
            dh01 = (-6 * s**2 + 6 * s) / h
            dh11 = 3 * s**2 - 2 * s
            f = dh00 * y0 + dh10 * f0 + dh01 * y1 + dh11 * f1
        W = self.conservation_basis
        cons = (xi - self.states_log[0]) @ W.T
        lyap = None
        if self.reference is not None:
            lyap = np.sum((xi - self.reference) ** 2 / self.d, axis=1)
        return Trajectory(times, xi, f, cons, self.d, lyap, self.converged_to, self.reference, W)

    def merged_with_grid(self, n_samples: int) -> "Trajectory":
        """Accepted steps plus ``n_samples`` uniformly spaced times, merged and de-duplicated."""
        grid = np.linspace(self.times[0], self.times[-1], n_samples)
        times = np.union1d(self.times, grid)
        return self.sample(times)

    def to_csv(self, fh=None) -> str | None:
        """Write ``t, x1..xn, xi1..xin, lyapunov, cons_1..cons_k`` rows at full precision.

        Returns the CSV text when ``fh`` is ``None``.
        """
        out = io.StringIO() if fh is None else fh
        n = self.states_log.shape[1]
        k = self.conservation.shape[1]
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["t"] + [f"x{i + 1}" for i in range(n)] + [f"xi{i + 1}" for i in range(n)] + ["lyapunov"] + [f"cons_{i + 1}" for i in range(k)])
        X = self.states
        for r in range(self.times.size):
            lyap = self.lyapunov[r] if self.lyapunov is not None else float("nan")
            row = [self.times[r], *X[r], *self.states_log[r], lyap, *self.conservation[r]]
            w.writerow([repr(float(v)) for v in row])
        return out.getvalue() if fh is None else None


def integrate(
    sys,
    x0,
    t_end: float,
    rel_tol: float = 1e-9,
    cert: BalanceCertificate | None = None,
    basis: SubspaceBasis | None = None,
    convergence_tol: float = CONVERGENCE_TOL,
    max_steps: int = 2_000_000,
) -> Trajectory:
    """Integrate from ``x0`` in log coordinates up to ``t_end`` or convergence.

    Args:
        sys: a :class:`ScaledSystem`, a bare :class:`EGraph` (``d = 1``) or a
            :class:`GlvSystem`.
        x0: positive initial state.
        rel_tol: accepted local error per step is ``rel_tol * (1 + |xi|_inf)``.
        cert: complex-balance certificate of the underlying graph; enables
            the weighted Lyapunov values.
        basis: stoichiometric basis of the graph (computed when omitted).
        convergence_tol: stop once ``|dxi/dt|_inf <= convergence_tol * (1 + |phi(xi0)|_inf)``.

    Raises:
        NonPositiveState, StepUnderflow, Overflow.
    """
    if isinstance(sys, EGraph):
        sys = ScaledSystem(sys)
    if not (1e-12 <= rel_tol <= 1e-3):
        raise ValidationError(f"rel_tol must lie in [1e-12, 1e-3], got {rel_tol!r}")
    if not t_end > 0:
        raise ValidationError(f"t_end must be positive, got {t_end!r}")
    if isinstance(sys, GlvSystem):
        if cert is not None:
            raise ValidationError("Lyapunov diagnostics need a graph, not a bare GlvSystem")
        field_ = LogField.from_system(sys)
    else:
        if basis is None:
            basis = stoichiometric_basis(sys.graph)
        field_ = LogField.from_scaled(sys, basis)
    n = field_.dimension
    x0 = _positive_state(x0, n)
    xi0 = np.log(x0)

    f0 = field_(xi0)
    threshold = convergence_tol * (1.0 + np.max(np.abs(f0 / field_.d)))

    times, S, derivs, status, t, h = integrate_log(
        field_.G, field_.Yt, xi0, float(t_end), rel_tol, threshold, int(max_steps), H_MIN, EXP_LIMIT
    )
    if status in (STEP_UNDERFLOW, STEP_LIMIT):
        raise StepUnderflow(t, h, np.exp(S[-1]))
    converged = S[-1].copy() if status == CONVERGED else None

    W = field_.invariant.basis_sperp
    cons = (S - xi0) @ W.T
    reference = lyap = None
    if cert is not None:
        reference = state_in_class(cert, basis, field_.d, xi0)
        lyap = np.sum((S - reference) ** 2 / field_.d, axis=1)
    return Trajectory(np.array(times), S, np.array(derivs), cons, field_.d.copy(), lyap, converged, reference, W)


def lyapunov_value(x, x_star, d=None) -> float:
    """``sum_i (log x_i - log x*_i)^2 / d_i``."""
    x_star = np.asarray(x_star, dtype=float)
    n = x_star.size
    x = _positive_state(x, n)
    x_star = _positive_state(x_star, n)
    d = np.ones(n) if d is None else np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise ValidationError("scaling entries must be positive")
    return float(np.sum((np.log(x) - np.log(x_star)) ** 2 / d))


def linear_lyapunov_check(g: EGraph, sc: StiemkeCertificate, trajectory: Trajectory, tol: float = 1e-9) -> bool:
    """True iff ``-<p, xi(t)>`` never increases by more than ``tol`` between rows."""
    p = np.asarray(sc.p, dtype=float)
    if p.size != g.dimension:
        raise ValidationError("certificate dimension does not match the graph")
    if len(trajectory) < 2:
        return True
    v = -(trajectory.states_log @ p)
    return bool(np.all(np.diff(v) <= tol))


def ensemble_initial_states(n: int, count: int, seed: int | None = None, bound: float = 2.0) -> np.ndarray:
    """``count`` positive states with ``log x`` uniform in ``[-bound, bound]^n``."""
    rng = np.random.default_rng(seed)
    return np.exp(rng.uniform(-bound, bound, size=(count, n)))
