"""Loss tolerance and logical-error model of tree-encoded photonic qubits.

Thin typed layer over the numeric kernels.  Every function takes the loss
as a scalar (uniform across the tree) or as one value per level, top level
first; feedback generation makes the per-level form the production path
because photons of different levels make different numbers of line passes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from gsrepeater import _kernels
from gsrepeater.params import ConfigError, TreeGeometry


class ClampCounter:
    """Counts probabilities nudged back into [0, 1] after float rounding."""

    def __init__(self):
        self.events = 0

    def clamp(self, x: float) -> float:
        if x < 0.0:
            self.events += 1
            return 0.0
        if x > 1.0:
            self.events += 1
            return 1.0
        return x


@dataclass(frozen=True)
class IndirectProfile:
    """Reconstruction success per level; R[0] serves the repeater graph."""

    R: tuple[float, ...]  # indices 0..d, R[d] == 0

    def __getitem__(self, level: int) -> float:
        return self.R[level]


@dataclass(frozen=True)
class TreeErrorModel:
    eps_sp: float
    e_I: tuple[float, ...]  # indirect-readout error at levels 1..d
    e_incorrect: float
    e_decoding: float | None  # None when the node never succeeds


def _check_mu(geometry: TreeGeometry, mu):
    """Validate a scalar-or-per-level loss spec; return the kernel argument."""
    if isinstance(mu, (int, float)):
        if not 0.0 <= mu <= 1.0:
            raise ConfigError("mu", "must be in [0, 1]")
        return float(mu)
    levels = tuple(float(x) for x in mu)
    if len(levels) != geometry.depth:
        raise ConfigError("mu", f"need one loss per level (d = {geometry.depth})")
    for x in levels:
        if not 0.0 <= x <= 1.0:
            raise ConfigError("mu", "losses must be in [0, 1]")
    return levels


def indirect_profile(geometry: TreeGeometry, mu) -> IndirectProfile:
    """Success probability of reconstructing a Z outcome at each level.

    ``mu`` is a scalar loss, or a sequence of d per-level losses (entry i is
    the loss of level-(i+1) photons).
    """
    val = _check_mu(geometry, mu)
    return IndirectProfile(tuple(_kernels.indirect_profile(geometry.branchings, val)))


def tree_node_success(geometry: TreeGeometry, mu) -> float:
    """Single-node probability of delivering a decodable logical X outcome."""
    if geometry.depth < 2:
        raise ConfigError("branchings", "needs depth >= 2")
    val = _check_mu(geometry, mu)
    return _kernels.tree_node_success(geometry.branchings, val)


def tree_success(geometry: TreeGeometry, mu, m: int = 0) -> float:
    """Probability that all m+1 trees of a chain deliver decodable outcomes."""
    if m < 0:
        raise ConfigError("m", "must be >= 0")
    return tree_node_success(geometry, mu) ** (m + 1)


def parity_error(errors) -> float:
    """Error probability of the XOR of independently flipped bits."""
    prod = 1.0
    for e in errors:
        prod *= 1.0 - 2.0 * e
    return 0.5 * (1.0 - prod)


def indirect_error(
    geometry: TreeGeometry, mu, eps_sp: float, profile: IndirectProfile | None = None
) -> tuple[float, ...]:
    """Majority-vote reconstruction error per level (index = level, 0 = root).

    ``profile`` is accepted for interface symmetry; the kernel recomputes the
    availability profile internally at negligible cost.
    """
    if not 0.0 <= eps_sp <= 0.5:
        raise ConfigError("eps_sp", "must be in [0, 1/2]")
    val = _check_mu(geometry, mu)
    e_ind, _ = _kernels.indirect_errors(geometry.branchings, val, eps_sp)
    return tuple(e_ind)


def blended_z_error(geometry: TreeGeometry, mu, eps_sp: float) -> tuple[float, ...]:
    """Error of the Z outcome actually used per level (indirect preferred)."""
    val = _check_mu(geometry, mu)
    _, z_blend = _kernels.indirect_errors(geometry.branchings, val, eps_sp)
    return tuple(z_blend)


def decoding_error(
    geometry: TreeGeometry,
    mu,
    eps_sp: float,
    counter: ClampCounter | None = None,
) -> tuple[float, float | None]:
    """(unconditional, conditional) probability of decoding a wrong X outcome.

    The conditional value is None when the node success probability is 0.
    """
    if geometry.depth < 2:
        raise ConfigError("branchings", "needs depth >= 2")
    val = _check_mu(geometry, mu)
    if not 0.0 <= eps_sp <= 0.5:
        raise ConfigError("eps_sp", "must be in [0, 1/2]")
    e_inc, e_dec = _kernels.tree_decoding_error(geometry.branchings, val, eps_sp)
    if counter is not None:
        e_inc = counter.clamp(e_inc)
        if not math.isnan(e_dec):
            e_dec = counter.clamp(e_dec)
    return e_inc, (None if math.isnan(e_dec) else e_dec)


def error_model(
    geometry: TreeGeometry,
    mu,
    eps_sp: float,
    counter: ClampCounter | None = None,
) -> TreeErrorModel:
    e_ind = indirect_error(geometry, mu, eps_sp)
    e_inc, e_dec = decoding_error(geometry, mu, eps_sp, counter)
    return TreeErrorModel(
        eps_sp=eps_sp,
        e_I=tuple(e_ind[1:]),
        e_incorrect=e_inc,
        e_decoding=e_dec,
    )


def tree_fidelity(e_decoding: float, m: int) -> float:
    """Fidelity after m+1 consecutive decodes, each erring independently."""
    if not 0.0 <= e_decoding <= 1.0:
        raise ConfigError("e_decoding", "must be in [0, 1]")
    if m < 0:
        raise ConfigError("m", "must be >= 0")
    exponent = m + 1
    if e_decoding == 0.0:
        return 1.0
    if exponent > 1000:
        return math.exp(exponent * math.log1p(-e_decoding)) if e_decoding < 1.0 else 0.0
    return (1.0 - e_decoding) ** exponent
