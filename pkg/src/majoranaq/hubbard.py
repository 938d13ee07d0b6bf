"""Fermi-Hubbard chain preset expressed in Majorana couplings.

Mode layout for S sites: spin-up orbitals are modes 1..S, spin-down orbitals
are modes S+1..2S, so M = 2S.  With n_k = (1 + i gamma_k gamma_{M+k}) / 2 the
Hubbard Hamiltonian

    H = -J sum_{s,sigma} (a^dag_{s,sigma} a_{s+1,sigma} + h.c.)
        + U sum_s n_{s,up} n_{s,down}

maps onto hopping entries t_{m, M+n} = t_{n, M+m} = -J/4 per bond, on-site
quadratic entries t_{k, M+k} = U/8, one quartic entry U/48 on the sorted
quadruple of each site's four Majorana labels, and an additive constant
U S / 4 that has no Majorana representation and is reported, not encoded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .fock import jordan_wigner_ladders
from .tensors import CouplingMatrix, QuarticCoupling, pair_count, _pair_lookup

__all__ = ["HubbardPreset", "preset_hubbard", "fermi_hubbard_matrix", "hubbard_comparison"]


@dataclass(frozen=True)
class HubbardPreset:
    """Majorana couplings of a Hubbard chain, plus the dropped identity shift."""

    sites: int
    t: CouplingMatrix
    g: QuarticCoupling
    identity_shift: float

    @property
    def M(self) -> int:
        return 2 * self.sites


def preset_hubbard(
    sites: int, hop: float, onsite: float, geometry: str = "chain"
) -> HubbardPreset:
    """Couplings (t, g) reproducing the Hubbard chain up to an identity shift."""
    if geometry != "chain":
        raise ValueError(f"unsupported geometry {geometry!r}; only 'chain' is available")
    if sites < 1:
        raise DimensionError(f"need at least one site, got {sites}")
    M = 2 * sites
    packed = np.zeros(pair_count(M))
    lookup = _pair_lookup(M)

    def add_t(i: int, j: int, v: float) -> None:
        # 0-based mode labels; store on the canonical slot with the right sign
        if i < j:
            packed[lookup[(i, j)]] += v
        else:
            packed[lookup[(j, i)]] -= v

    for s in range(sites - 1):
        for spin_offset in (0, sites):
            m, n = s + spin_offset, s + 1 + spin_offset
            add_t(m, M + n, -hop / 4.0)
            add_t(n, M + m, -hop / 4.0)
    g_entries = []
    shift = 0.0
    for s in range(sites):
        p, q = s, sites + s
        add_t(p, M + p, onsite / 8.0)
        add_t(q, M + q, onsite / 8.0)
        quad = tuple(sorted((p + 1, q + 1, M + p + 1, M + q + 1)))
        g_entries.append((*quad, onsite / 48.0))
        shift += onsite / 4.0
    return HubbardPreset(
        sites,
        CouplingMatrix(M, packed),
        QuarticCoupling.from_entries(M, g_entries),
        shift,
    )


def fermi_hubbard_matrix(sites: int, hop: float, onsite: float) -> np.ndarray:
    """Reference Hubbard matrix built directly from ladder operators."""
    M = 2 * sites
    a = jordan_wigner_ladders(M)
    dim = 2 ** M
    H = np.zeros((dim, dim), dtype=complex)
    for s in range(sites - 1):
        for spin_offset in (0, sites):
            m, n = s + spin_offset, s + 1 + spin_offset
            H += -hop * (a[m].conj().T @ a[n] + a[n].conj().T @ a[m])
    for s in range(sites):
        n_up = a[s].conj().T @ a[s]
        n_dn = a[sites + s].conj().T @ a[sites + s]
        H += onsite * n_up @ n_dn
    return H


def hubbard_comparison(preset: HubbardPreset, hop: float, onsite: float) -> float:
    """Max residual between the Majorana build and the ladder-operator build.

    The two differ by the reported identity shift; the comparison removes it
    by subtracting the trace part of each matrix.
    """
    from .fock import build_majoranas, build_hamiltonian
    from .tensors import HamiltonianSpec

    majo = build_majoranas(preset.M)
    h_majorana = build_hamiltonian(HamiltonianSpec(preset.M, preset.t, preset.g), majo)
    h_direct = fermi_hubbard_matrix(preset.sites, hop, onsite)
    dim = h_direct.shape[0]

    def traceless(mat: np.ndarray) -> np.ndarray:
        return mat - np.trace(mat) / dim * np.eye(dim)

    return float(np.max(np.abs(traceless(h_majorana) - traceless(h_direct))))
