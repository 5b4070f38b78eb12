"""Search for a function on which sampling and Faber-Schauder encoders disagree."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError, DiagnosticFailure
from ..funcspace import Domain, GridFunction, evaluate_many
from .basis import BasisSpec, basis_encoder, faber_schauder_nodes

DEFAULT_TOL = 1e-6


def dyadic_sequence(levels: int) -> np.ndarray:
    """Nested points ``0, 1, 1/2, 1/4, 3/4, 1/8, ...`` with ``2**levels + 1`` entries."""
    count = 2**levels + 1
    pts = [0.0, 1.0] + [faber_schauder_nodes(i)[1] for i in range(3, count + 1)]
    return np.array(pts)


@dataclass(frozen=True)
class Witness:
    function: GridFunction
    n: int
    k: int
    disagreement: float
    label: str


def smooth_bump(center: float, radius: float, domain: Domain | None = None, shape=1025) -> GridFunction:
    """Peak-one bump ``exp(1 - r^2 / (r^2 - d^2))`` supported in ``(c - r, c + r)``."""

    def fn(x):
        d2 = (x - center) ** 2
        inside = d2 < radius**2
        out = np.zeros_like(x)
        out[inside] = np.exp(1.0 - radius**2 / (radius**2 - d2[inside]))
        return out

    return GridFunction.from_callable(fn, domain or Domain.unit(1), shape)


def default_candidates(points: np.ndarray, shape: int) -> list:
    """Bumps centred in gaps between early samples, then the constant atom."""
    out = []
    for early in (3, 5, 9):
        srt = np.sort(points[:early])
        gaps = np.diff(srt)
        j = int(np.argmax(gaps))
        c = 0.5 * (srt[j] + srt[j + 1])
        out.append((f"bump@{c:g}", smooth_bump(c, 0.5 * gaps[j], shape=shape)))
    out.append(("constant", GridFunction.constant(1.0, shape=shape)))
    return out


def encoder_divergence_witness(
    points=None,
    k_of_n=None,
    candidates=None,
    shape: int = 1025,
    tol: float = DEFAULT_TOL,
    max_n: int = 8,
) -> Witness:
    """First ``(f, N)`` with ``max |E_N(f) - E~_{k(N)}(f)| > tol``.

    ``E_N`` samples ``f`` at the first ``k(N)`` entries of a nested point
    sequence and ``E~`` returns the first ``k(N)`` Faber-Schauder
    coefficients. Because the sequence is nested, disagreement at ``N``
    persists for every larger ``n``.
    """
    if points is None:
        points = dyadic_sequence(max_n)
    points = np.asarray(points, dtype=float)
    if k_of_n is None:
        k_of_n = [min(2**n + 1, len(points)) for n in range(1, max_n + 1)]
    k_of_n = [int(k) for k in k_of_n]
    if any(b <= a for a, b in zip(k_of_n, k_of_n[1:])) or k_of_n[-1] > len(points):
        raise ConfigurationError("k(n) must increase strictly and stay within the point sequence")
    if candidates is None:
        candidates = default_candidates(points, shape)
    domain = Domain.unit(1)
    fs_full = basis_encoder(BasisSpec.FABER_SCHAUDER, k_of_n[-1], domain, shape)
    for label, f in candidates:
        samples = evaluate_many(f, points[: k_of_n[-1], None])
        coeffs = fs_full.apply(f)
        for n, k in enumerate(k_of_n, start=1):
            gap = float(np.max(np.abs(samples[:k] - coeffs[:k])))
            if gap > tol:
                return Witness(f, n, k, gap, label)
    raise DiagnosticFailure(f"no candidate separates the encoders within n <= {len(k_of_n)}")
