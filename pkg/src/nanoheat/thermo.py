"""Spectra, thermal states, entropies and Renyi divergences for energy-diagonal states.

Conventions used throughout the package:

- natural units with k_B = 1, so temperatures and inverse temperatures
  interconvert as beta = 1/T;
- natural logarithms everywhere (entropies in nats);
- every power p^a * q^(1-a) is evaluated as exp(a*ln p + (1-a)*ln q) with
  max-term subtraction, so Renyi orders from 1e-6 up to 1e6 stay in range.

All values are immutable after construction and all operations are pure
functions, safe to share across concurrent workers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .errors import CapacityError, DomainError, ParameterError

#: Finite Renyi orders closer than this to 1 are routed through the
#: relative-entropy branch plus a first-order term; the generic power-sum
#: formula degenerates to 0/0 there.
ALPHA_SEAM = 1e-6

#: Largest composite dimension compose() will materialize.
MAX_COMPOSITE_LEVELS = 2 ** 22

#: Tolerance on probability normalization everywhere.
NORMALIZATION_TOL = 1e-12


def logsumexp(values, axis=None):
    """log(sum(exp(values))) with max-term subtraction; safe for -inf entries."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return -math.inf
    if axis is None:
        m = float(np.max(arr))
        if not math.isfinite(m):
            return m
        return m + math.log(float(np.sum(np.exp(arr - m))))
    m = np.max(arr, axis=axis, keepdims=True)
    m = np.where(np.isfinite(m), m, 0.0)
    out = np.log(np.sum(np.exp(arr - m), axis=axis)) + np.squeeze(m, axis=axis)
    return out


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnergySpectrum:
    """Finite list of energy eigenvalues of a diagonal Hamiltonian.

    Levels are stored sorted ascending; two spectra compare equal iff their
    sorted levels are float-identical (no tolerance, to prevent silent
    misalignment of probability vectors).
    """

    levels: Tuple[float, ...]
    label: str | None = None

    def __post_init__(self):
        try:
            levels = tuple(float(e) for e in self.levels)
        except (TypeError, ValueError) as exc:
            raise ParameterError(f"levels must be real numbers: {exc}") from exc
        if len(levels) < 1:
            raise ParameterError("a spectrum needs at least one level")
        if not all(math.isfinite(e) for e in levels):
            raise ParameterError("all energy levels must be finite")
        object.__setattr__(self, "levels", tuple(sorted(levels)))

    @property
    def size(self) -> int:
        return len(self.levels)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.levels, dtype=float)

    def log_partition(self, beta: float) -> float:
        """ln Z(beta) = ln sum_i exp(-beta * E_i)."""
        if beta <= 0:
            raise ParameterError(f"beta must be positive, got {beta}")
        return float(logsumexp(-beta * self.array))

    def __eq__(self, other):
        return isinstance(other, EnergySpectrum) and self.levels == other.levels

    def __hash__(self):
        return hash(self.levels)


@dataclass(frozen=True)
class QubitBath:
    """A bath of n two-level systems with strictly positive gaps E_1..E_n."""

    gaps: Tuple[float, ...]

    def __post_init__(self):
        gaps = tuple(float(e) for e in self.gaps)
        if len(gaps) < 1:
            raise ParameterError("a qubit bath needs at least one qubit")
        if any((not math.isfinite(e)) or e <= 0 for e in gaps):
            raise ParameterError("every qubit gap must be finite and > 0")
        object.__setattr__(self, "gaps", gaps)

    @property
    def n(self) -> int:
        return len(self.gaps)

    def spectrum(self) -> EnergySpectrum:
        """The composed 2^n-level spectrum (all sums of one level per qubit)."""
        if 2 ** self.n > MAX_COMPOSITE_LEVELS:
            raise CapacityError(f"2^{self.n} levels exceed the composite cap")
        levels = np.zeros(1)
        for gap in self.gaps:
            levels = np.add.outer(levels, np.array([0.0, gap])).ravel()
        return EnergySpectrum(tuple(levels))


@dataclass(frozen=True)
class DiagonalState:
    """Probability vector aligned with an EnergySpectrum."""

    probs: Tuple[float, ...]
    spectrum: EnergySpectrum

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.ndim != 1 or probs.size != self.spectrum.size:
            raise ParameterError("probs must be a vector with one entry per level")
        if np.any(probs < 0) or not np.all(np.isfinite(probs)):
            raise ParameterError("probabilities must be finite and nonnegative")
        if abs(float(probs.sum()) - 1.0) > NORMALIZATION_TOL:
            raise ParameterError(f"probabilities sum to {probs.sum()!r}, not 1")
        object.__setattr__(self, "probs", tuple(float(x) for x in probs))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)

    @property
    def full_rank(self) -> bool:
        return min(self.probs) > 0.0


@dataclass(frozen=True)
class Alpha:
    """Tagged Renyi order: zero, a finite positive real (!= 1), one, or infinity."""

    kind: str
    value: float = math.nan

    _KINDS = ("zero", "finite", "one", "infinity")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ParameterError(f"unknown alpha kind {self.kind!r}")
        if self.kind == "finite" and not (math.isfinite(self.value) and self.value > 0):
            raise ParameterError("finite alpha must be a positive real")

    @classmethod
    def of(cls, x) -> "Alpha":
        """Coerce a float (or Alpha) to a tagged order. 0 -> ZERO, 1 -> ONE, inf -> INFINITY."""
        if isinstance(x, Alpha):
            return x
        x = float(x)
        if x == 0.0:
            return cls.ZERO
        if x == 1.0:
            return cls.ONE
        if math.isinf(x) and x > 0:
            return cls.INFINITY
        if not (x > 0) or not math.isfinite(x):
            raise ParameterError(f"Renyi order must be in [0, inf], got {x}")
        return cls("finite", x)

    @property
    def is_zero(self):
        return self.kind == "zero"

    @property
    def is_one(self):
        return self.kind == "one"

    @property
    def is_infinity(self):
        return self.kind == "infinity"

    @property
    def is_finite(self):
        return self.kind == "finite"

    def __float__(self):
        return {"zero": 0.0, "one": 1.0, "infinity": math.inf}.get(self.kind, self.value)

    def __repr__(self):
        if self.kind == "finite":
            return f"Alpha({self.value!r})"
        return f"Alpha.{self.kind.upper()}"


Alpha.ZERO = Alpha("zero", 0.0)
Alpha.ONE = Alpha("one", 1.0)
Alpha.INFINITY = Alpha("infinity", math.inf)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def thermal_state(spectrum: EnergySpectrum, beta: float) -> DiagonalState:
    """Gibbs state exp(-beta*E_i)/Z on the given spectrum.

    The exponent is shifted by the smallest level so that beta*E up to a few
    hundred stays representable.
    """
    if not (isinstance(beta, (int, float)) and beta > 0):
        raise ParameterError(f"beta must be positive, got {beta!r}")
    energies = spectrum.array
    w = np.exp(-float(beta) * (energies - energies.min()))
    return DiagonalState(tuple(w / w.sum()), spectrum)


def state_moments(state: DiagonalState) -> Tuple[float, float, float]:
    """(mean energy, energy variance, Shannon/von Neumann entropy in nats)."""
    p = state.array
    e = state.spectrum.array
    mean = float(p @ e)
    var = float(p @ (e * e)) - mean * mean
    support = p > 0
    entropy = float(-np.sum(p[support] * np.log(p[support])))
    return mean, var, entropy


def binary_entropy(eps: float) -> float:
    """h2(eps) = -eps*ln(eps) - (1-eps)*ln(1-eps), with h2(0) = h2(1) = 0."""
    if not 0.0 <= eps <= 1.0:
        raise ParameterError(f"eps must lie in [0, 1], got {eps}")
    if eps in (0.0, 1.0):
        return 0.0
    return float(-eps * math.log(eps) - (1.0 - eps) * math.log1p(-eps))


def _check_pair(p: DiagonalState, q: DiagonalState):
    if p.spectrum != q.spectrum:
        raise ParameterError("states live on different spectra")
    if not q.full_rank:
        raise DomainError("reference state must have full rank")


def kl_divergence_and_variance(p: DiagonalState, q: DiagonalState) -> Tuple[float, float]:
    """Relative entropy D1(p||q) and the variance of the log-likelihood ratio.

    The variance is the first-order coefficient of D_alpha around alpha = 1
    (divided by 2), used by the seam branch of renyi_divergence.
    """
    _check_pair(p, q)
    pa, qa = p.array, q.array
    s = pa > 0
    x = np.log(pa[s]) - np.log(qa[s])
    d1 = float(pa[s] @ x)
    var = float(pa[s] @ (x * x)) - d1 * d1
    return d1, var


def renyi_divergence(p: DiagonalState, q: DiagonalState, alpha) -> float:
    """D_alpha(p||q) for energy-diagonal states sharing a spectrum.

    Branches:
      finite a != 1 : (1/(a-1)) * ln sum_{p_i>0} exp(a*ln p_i + (1-a)*ln q_i)
      a = 1         : sum_{p_i>0} p_i (ln p_i - ln q_i)
      a = 0         : -ln sum_{i: p_i != 0} q_i   (support projection)
      a = inf       : ln max_i p_i / q_i

    Finite orders within ALPHA_SEAM of 1 are evaluated as
    D1 + (a-1)*var/2 instead of through the generic formula.
    """
    a = Alpha.of(alpha)
    _check_pair(p, q)
    pa, qa = p.array, q.array
    s = pa > 0
    if a.is_zero:
        return float(-math.log(float(qa[s].sum()))) + 0.0
    if a.is_infinity:
        return float(np.max(np.log(pa[s]) - np.log(qa[s])))
    if a.is_one:
        d1, _ = kl_divergence_and_variance(p, q)
        return d1
    v = a.value
    if abs(v - 1.0) <= ALPHA_SEAM:
        d1, var = kl_divergence_and_variance(p, q)
        return d1 + (v - 1.0) * var / 2.0
    t = v * np.log(pa[s]) + (1.0 - v) * np.log(qa[s])
    return float(logsumexp(t)) / (v - 1.0)


def alpha_free_energy(rho: DiagonalState, tau_h: DiagonalState, alpha, beta_h: float) -> float:
    """Generalized free energy F_alpha = (D_alpha(rho||tau_h) - ln Z_h) / beta_h.

    tau_h must be the thermal state of rho's spectrum at beta_h; at alpha = 1
    this reduces to the Helmholtz form <H> - S/beta_h.
    """
    if beta_h <= 0:
        raise ParameterError("beta_h must be positive")
    expected = thermal_state(rho.spectrum, beta_h)
    if np.max(np.abs(expected.array - tau_h.array)) > 1e-9:
        raise ParameterError("tau_h is not the thermal state of rho's spectrum at beta_h")
    ln_z = rho.spectrum.log_partition(beta_h)
    return (renyi_divergence(rho, tau_h, alpha) - ln_z) / beta_h


def compose(parts: Sequence[Tuple[EnergySpectrum, DiagonalState]]) -> Tuple[EnergySpectrum, DiagonalState]:
    """Product spectrum and product distribution of several subsystems.

    Renyi divergences are additive under this composition. Raises
    CapacityError if the composite would exceed MAX_COMPOSITE_LEVELS.
    """
    parts = list(parts)
    if not parts:
        raise ParameterError("compose needs at least one part")
    total = 1
    for spec, state in parts:
        if state.spectrum != spec:
            raise ParameterError("state/spectrum pair mismatch in compose")
        total *= spec.size
        if total > MAX_COMPOSITE_LEVELS:
            raise CapacityError(f"composite with >{MAX_COMPOSITE_LEVELS} levels not supported")
    levels = np.zeros(1)
    probs = np.ones(1)
    for spec, state in parts:
        levels = np.add.outer(levels, spec.array).ravel()
        probs = np.multiply.outer(probs, state.array).ravel()
    order = np.argsort(levels, kind="stable")
    levels = levels[order]
    probs = probs[order]
    probs = probs / probs.sum()  # absorb float drift from long products
    spectrum = EnergySpectrum(tuple(levels))
    return spectrum, DiagonalState(tuple(probs), spectrum)
