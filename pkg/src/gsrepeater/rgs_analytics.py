"""Success and fidelity model of the all-photonic repeater-graph link.

Link success follows the closed forms (Bell-measurement attempts on arm
pairs, logical X on the two flanking cores, logical Z on the rest).  The
Bell-pair fidelity is a first-order independent-error product gated by the
Monte Carlo oracle, not claimed exact.

Loss arguments take a scalar or one value per encoding level (top level
first); ``mu_arm`` overrides the arm photons' loss, which otherwise tracks
the bottom encoding level (both classes are emitted directly).
"""

from __future__ import annotations

from dataclasses import dataclass

from gsrepeater import _kernels
from gsrepeater.params import ConfigError, RgsGeometry, TreeGeometry
from gsrepeater.tree_analytics import ClampCounter, _check_mu


@dataclass(frozen=True)
class RgsLinkMetrics:
    P_BSM: float
    P_X: float
    P_Z: float
    P_succ: float
    e_X: float | None = None
    e_Z: float | None = None
    F: float | None = None


def _check(geometry: RgsGeometry, mu, mu_arm: float | None):
    if not isinstance(geometry, RgsGeometry):
        raise ConfigError("geometry", "expected an rgs geometry")
    if mu_arm is not None and not 0.0 <= mu_arm <= 1.0:
        raise ConfigError("mu_arm", "must be in [0, 1]")
    return _check_mu(geometry.encoding, mu)


def rgs_success(
    geometry: RgsGeometry, mu, m: int = 0, mu_arm: float | None = None
) -> RgsLinkMetrics:
    """Link success factors and the end-to-end success over m+1 links."""
    val = _check(geometry, mu, mu_arm)
    if m < 0:
        raise ConfigError("m", "must be >= 0")
    p_bsm, p_x, p_z, p_link = _kernels.rgs_components(
        geometry.n_arms, geometry.encoding.branchings, val, mu_arm
    )
    return RgsLinkMetrics(
        P_BSM=p_bsm, P_X=p_x, P_Z=p_z, P_succ=p_link ** (m + 1)
    )


def encoded_errors(
    encoding: TreeGeometry, mu, eps_sp: float
) -> tuple[float, float]:
    """(e_X, e_Z): logical readout errors of one encoded core qubit.

    The X pattern is the root-level majority reconstruction; the Z pattern
    is the parity of the top-level outcomes, each taken through the
    direct/indirect availability blend.
    """
    if encoding.depth < 2:
        raise ConfigError("branchings", "encoding needs depth >= 2")
    if not 0.0 <= eps_sp <= 0.5:
        raise ConfigError("eps_sp", "must be in [0, 1/2]")
    val = _check_mu(encoding, mu)
    return _kernels.rgs_errors(encoding.branchings, val, eps_sp)


def rgs_fidelity(
    metrics: RgsLinkMetrics, n_arms: int, m: int, eps_sp: float
) -> float:
    """End-to-end Bell fidelity over m+1 links.

    Per link: the two measured arm photons, the two logical X readouts, and
    the N-2 logical Z readouts each degrade the pair independently.
    """
    if metrics.e_X is None or metrics.e_Z is None:
        raise ConfigError("metrics", "e_X/e_Z missing; use link_metrics")
    f_link = (
        (1.0 - eps_sp) ** 2
        * (1.0 - metrics.e_X) ** 2
        * (1.0 - metrics.e_Z) ** (n_arms - 2)
    )
    return f_link ** (m + 1)


def link_metrics(
    geometry: RgsGeometry,
    mu,
    eps_sp: float,
    m: int = 0,
    counter: ClampCounter | None = None,
    mu_arm: float | None = None,
) -> RgsLinkMetrics:
    """Full per-configuration metrics: success factors, errors, fidelity."""
    val = _check(geometry, mu, mu_arm)
    b = geometry.encoding.branchings
    p_bsm, p_x, p_z, p_link = _kernels.rgs_components(geometry.n_arms, b, val, mu_arm)
    e_x, e_z = _kernels.rgs_errors(b, val, eps_sp)
    _, f_link = _kernels.rgs_link(geometry.n_arms, b, val, eps_sp, mu_arm)
    if counter is not None:
        e_x = counter.clamp(e_x)
        e_z = counter.clamp(e_z)
        f_link = counter.clamp(f_link)
    return RgsLinkMetrics(
        P_BSM=p_bsm,
        P_X=p_x,
        P_Z=p_z,
        P_succ=p_link ** (m + 1),
        e_X=e_x,
        e_Z=e_z,
        F=f_link ** (m + 1),
    )
