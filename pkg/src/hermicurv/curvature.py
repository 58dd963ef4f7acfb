"""The three curvature tensors and their cross-checks.

* canonical-connection curvature of the holomorphic tangent bundle,
  kr[a, b, g, d]:

      kr = -d2 h[a,b] / dz^g dzbar^d
           + (dh[a,l]/dz^g) h_inv[l,k] (dh[k,b]/dzbar^d)

* the Riemannian curvature R[i, j, k, l] of g = Re h, from the second
  derivatives of g plus bracket-symbol products; the index and sign
  convention is pinned so that the pairing R(u, v, v, u) =
  R[i,j,k,l] u^i v^j v^k u^l is positive on positively curved model
  metrics;

* the complexification of R over the frame (dz^1..dz^n, dzbar^1..dzbar^n),
  scaled so that on a metric whose canonical connection is torsion free
  the mixed block with alternating conjugations reproduces kr exactly.

The mixed block is also computed a second way, directly from the metric
jet (a four-term formula involving symmetrized and antisymmetrized first
derivatives); agreement between the two routes is the module's central
consistency check, exercised heavily by the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .connection import RealChristoffel
from .field import MetricJet, RealMetricJet

__all__ = [
    "ChernCurvature",
    "RealCurvature",
    "ComplexifiedCurvature",
    "chern_curvature",
    "real_curvature",
    "complexify_curvature",
    "complexified_11_direct",
]


@dataclass(frozen=True)
class ChernCurvature:
    """kr[a, b, g, d], conjugate-linear in slots b and d.

    Pair-Hermitian: kr[a,b,g,d] = conj(kr[b,a,d,g]).
    """

    kr: np.ndarray

    @property
    def n(self) -> int:
        return self.kr.shape[0]


@dataclass(frozen=True)
class RealCurvature:
    """r[i, j, k, l] with the classical algebraic symmetries."""

    r: np.ndarray

    def pairing(self, a, b, c, d) -> float:
        """R(a, b, c, d) on real tangent vectors."""
        return float(np.einsum("ijkl,i,j,k,l->", self.r, a, b, c, d))


@dataclass(frozen=True)
class ComplexifiedCurvature:
    """tensor[A, B, C, D] over the complex frame, A..D in 0..2n-1.

    Indices below n are the holomorphic directions, indices n..2n-1 the
    conjugate ones.  Contract barred arguments with embed_anti vectors.
    """

    tensor: np.ndarray
    n: int

    def block(self, kinds: str) -> np.ndarray:
        """Slice by index type, e.g. block("hhaa") for two of each."""
        n = self.n
        sl = {"h": slice(0, n), "a": slice(n, 2 * n)}
        k = kinds.strip().lower()
        if len(k) != 4 or any(c not in sl for c in k):
            raise ValueError("kinds must be four letters drawn from 'h' and 'a'")
        return self.tensor[sl[k[0]], sl[k[1]], sl[k[2]], sl[k[3]]]


def chern_curvature(jet: MetricJet) -> ChernCurvature:
    kr = -jet.d2_mixed.transpose(2, 3, 0, 1) + np.einsum(
        "gal,lk,dkb->abgd", jet.d1_holo, jet.h_inv, jet.d1_anti
    )
    return ChernCurvature(kr)


def real_curvature(rjet: RealMetricJet, rchris: RealChristoffel) -> RealCurvature:
    """Curvature of the Levi-Civita connection from the real jet.

    The second-derivative block uses d2g[k, l, i, j] (derivative axes
    first); the quadratic block contracts bracket symbols through g_inv.
    """
    d2g = rjet.d2g
    br = rchris.brackets
    gi = rjet.g_inv
    second = 0.5 * (
        np.einsum("jlik->ijkl", d2g)
        + np.einsum("ikjl->ijkl", d2g)
        - np.einsum("jkil->ijkl", d2g)
        - np.einsum("iljk->ijkl", d2g)
    )
    quad = np.einsum("st,jls,ikt->ijkl", gi, br, br) - np.einsum(
        "st,jks,ilt->ijkl", gi, br, br
    )
    return RealCurvature(second + quad)


def _transition_matrix(n: int) -> np.ndarray:
    """Columns express dz^a and dzbar^a frame vectors in the real frame."""
    T = np.zeros((2 * n, 2 * n), dtype=complex)
    idx = np.arange(n)
    T[idx, idx] = 0.5
    T[n + idx, idx] = -0.5j
    T[idx, n + idx] = 0.5
    T[n + idx, n + idx] = 0.5j
    return T


def complexify_curvature(rc: RealCurvature) -> ComplexifiedCurvature:
    """Extend R over the complex frame, with the factor-2 normalization
    that makes the alternating mixed block comparable to kr."""
    m = rc.r.shape[0]
    n = m // 2
    T = _transition_matrix(n)
    tensor = 2.0 * np.einsum(
        "ijkl,iA,jB,kC,lD->ABCD", rc.r.astype(complex), T, T, T, T, optimize=True
    )
    return ComplexifiedCurvature(tensor, n)


def complexified_11_direct(jet: MetricJet) -> np.ndarray:
    """The alternating mixed block straight from the metric jet.

    out[a, b, m, v] matches the complexified tensor entry
    tensor[a, n+b, m, n+v] (the "haha" block) to high accuracy for every
    Hermitian metric; under the torsion-free (Kahler) degeneration it
    collapses to the canonical curvature kr.  Four pieces: mixed second
    derivatives, a symmetrized product, and two antisymmetrized
    correction products.
    """
    Hi = jet.h_inv
    d1h, d1a, d2m = jet.d1_holo, jet.d1_anti, jet.d2_mixed

    term1 = -0.5 * (np.einsum("mbav->abmv", d2m) + np.einsum("avmb->abmv", d2m))

    S1 = d1h + d1h.transpose(1, 0, 2)
    S2 = d1a + d1a.transpose(2, 1, 0)
    term2 = 0.25 * np.einsum("mal,lk,bkv->abmv", S1, Hi, S2)

    F1 = d1a - d1a.transpose(2, 1, 0)
    F2 = d1h - d1h.transpose(1, 0, 2)
    term3 = -0.25 * np.einsum("bml,lk,akv->abmv", F1, Hi, F2)
    term4 = -0.25 * np.einsum("val,lk,mkb->abmv", F1, Hi, F2)

    return term1 + term2 + term3 + term4
