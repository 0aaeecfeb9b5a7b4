"""Model domains: balls and axis-aligned ellipsoids in C^n.

Both carry a global defining function rho with constant complex Hessian,

    ball(R):            rho(z) = |z|^2 - R^2,          hess = I
    ellipsoid(a_1..a_n): rho(z) = sum a_j |z_j|^2 - 1,  hess = diag(a)

so they are strongly m-pseudoconvex for every m <= n with an explicitly
computable constant.  Points are complex vectors of length n; the real
gradient is packed as the complex vector g_j = d rho/dx_j + i d rho/dy_j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import elementary_symmetric_all
from .errors import ArgumentError, DomainError

BOUNDARY_TOL = 1e-10


@dataclass(frozen=True)
class Domain:
    kind: str  # "ball" or "ellipsoid"
    n: int
    radius: float = 1.0
    coeffs: tuple = field(default=())

    @staticmethod
    def ball(n: int, radius: float = 1.0) -> "Domain":
        if n < 1 or radius <= 0:
            raise ArgumentError("ball needs n >= 1 and radius > 0")
        return Domain(kind="ball", n=n, radius=float(radius))

    @staticmethod
    def ellipsoid(coeffs) -> "Domain":
        a = tuple(float(c) for c in coeffs)
        if len(a) < 1 or any(c <= 0 for c in a):
            raise ArgumentError("ellipsoid coefficients must be positive")
        return Domain(kind="ellipsoid", n=len(a), coeffs=a)

    @staticmethod
    def parse(text: str, n: int | None = None) -> "Domain":
        """Parse 'ball:R' (needs n) or 'ellipsoid:a1,...,an'."""
        kind, _, rest = text.partition(":")
        if kind == "ball":
            if n is None:
                raise ArgumentError("ball domain needs the dimension n")
            return Domain.ball(n, float(rest) if rest else 1.0)
        if kind == "ellipsoid":
            coeffs = [float(x) for x in rest.split(",") if x]
            dom = Domain.ellipsoid(coeffs)
            if n is not None and dom.n != n:
                raise ArgumentError("ellipsoid coefficient count disagrees with n")
            return dom
        raise ArgumentError(f"unknown domain kind {kind!r}")

    # -- defining function and derivatives -------------------------------

    def rho(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.kind == "ball":
            return (np.abs(z) ** 2).sum(axis=-1) - self.radius**2
        a = np.asarray(self.coeffs)
        return (a * np.abs(z) ** 2).sum(axis=-1) - 1.0

    def grad_rho(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.kind == "ball":
            return 2.0 * z
        a = np.asarray(self.coeffs)
        return 2.0 * a * z

    def hess_rho(self, z=None) -> np.ndarray:
        if self.kind == "ball":
            return np.eye(self.n, dtype=complex)
        return np.diag(np.asarray(self.coeffs, dtype=complex))

    # -- metric quantities ------------------------------------------------

    @property
    def diameter(self) -> float:
        if self.kind == "ball":
            return 2.0 * self.radius
        return 2.0 / math.sqrt(min(self.coeffs))

    @property
    def barycenter(self) -> np.ndarray:
        return np.zeros(self.n, dtype=complex)

    def boundary_radius_range(self) -> tuple[float, float]:
        """Min and max of |z| over the boundary."""
        if self.kind == "ball":
            return (self.radius, self.radius)
        return (1.0 / math.sqrt(max(self.coeffs)), 1.0 / math.sqrt(min(self.coeffs)))

    def lipschitz_rho(self) -> float:
        """Upper bound of |grad rho| on a neighbourhood of the closure."""
        if self.kind == "ball":
            return 2.0 * self.radius * 1.05
        rmax = self.boundary_radius_range()[1]
        return 2.0 * max(self.coeffs) * rmax * 1.05

    def contains(self, z, tol: float = 0.0) -> np.ndarray:
        return self.rho(z) < tol


def pseudoconvexity_constant(
    domain: Domain, m: int, samples: int = 200, seed: int = 0
) -> float:
    """Min over sampled points and k = 1..m of sigma_tilde_k(hess rho).

    Sampling covers interior points plus a boundary collar of width 1% of
    the diameter, since the defining inequality is required on a
    neighbourhood of the closure.  For these constant-Hessian domains the
    minimum is point-independent; the sampling guards the interface.
    """
    if not 1 <= m <= domain.n:
        raise ArgumentError(f"m={m} out of range for n={domain.n}")
    pts = sample_interior(domain, samples, seed)
    collar = 0.01 * domain.diameter
    bnd = sample_boundary(domain, samples, seed + 1)
    norms = np.sqrt((np.abs(bnd) ** 2).sum(-1, keepdims=True))
    outward = bnd * (1.0 + collar / np.maximum(norms, 1e-30))
    points = np.concatenate([pts, bnd, outward], axis=0)
    best = math.inf
    n = domain.n
    for z in points:
        lam = np.linalg.eigvalsh(domain.hess_rho(z))
        h = elementary_symmetric_all(lam, m)
        for k in range(1, m + 1):
            best = min(best, h[k] / math.comb(n, k))
    if best <= 0:
        raise DomainError(f"domain is not strongly {m}-pseudoconvex (A={best})")
    return float(best)


def sample_boundary(domain: Domain, count: int, seed: int) -> np.ndarray:
    """Seeded boundary samples, asymptotically uniform in surface measure.

    Ball: Gaussian directions projected to the sphere.  Ellipsoid: sphere
    samples mapped through z_j = u_j / sqrt(a_j) and thinned by rejection
    with the surface-area distortion weight sqrt(sum a_j |u_j|^2) / max.
    Samples are drawn sequentially, so for a fixed seed the first k points
    of a longer run coincide with a shorter run.
    """
    if count < 1:
        raise ArgumentError("count must be >= 1")
    rng = np.random.default_rng(seed)
    n = domain.n
    out = np.empty((count, n), dtype=complex)
    if domain.kind == "ball":
        # one batched draw consumes the stream exactly like per-sample
        # draws, so the prefix property is preserved
        g = rng.standard_normal((count, 2 * n))
        g /= np.sqrt((g**2).sum(axis=1, keepdims=True))
        return (g[:, 0::2] + 1j * g[:, 1::2]) * domain.radius
    a = np.asarray(domain.coeffs)
    inv_sqrt = 1.0 / np.sqrt(a)
    wmax = math.sqrt(max(domain.coeffs))
    i = 0
    while i < count:
        g = rng.standard_normal(2 * n)
        g /= np.sqrt((g**2).sum())
        u = g[0::2] + 1j * g[1::2]
        weight = math.sqrt(float((a * np.abs(u) ** 2).sum()))
        if rng.random() * wmax <= weight:
            out[i] = u * inv_sqrt
            i += 1
    return out


def sample_interior(domain: Domain, count: int, seed: int) -> np.ndarray:
    """Uniform interior samples by rejection from the bounding box."""
    if count < 1:
        raise ArgumentError("count must be >= 1")
    rng = np.random.default_rng(seed)
    n = domain.n
    if domain.kind == "ball":
        half = np.full(n, domain.radius)
    else:
        half = 1.0 / np.sqrt(np.asarray(domain.coeffs))
    out = np.empty((count, n), dtype=complex)
    i = 0
    while i < count:
        batch = max(2 * (count - i), 64)
        g = rng.uniform(-1.0, 1.0, (batch, 2 * n))
        z = (g[:, 0::2] + 1j * g[:, 1::2]) * half
        keep = z[domain.rho(z) < 0.0]
        take = min(len(keep), count - i)
        out[i : i + take] = keep[:take]
        i += take
    return out
