"""Single-photon loss budget and auxiliary-line geometry.

Four independent loss sources compose into the loss probabilities the
success formulas consume: fiber attenuation between nodes, chip/fiber
coupling, loss inside the generation hardware (feedback-line round trips),
and the reordering delay line every photon traverses.  The internal loss
differs per photon class (tree level, or the repeater graph's arm photons)
because the number of feedback-line passes does; the budget therefore
carries one composed loss per class alongside a conservative worst-case
scalar for reporting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from gsrepeater.params import (
    ChannelParams,
    ConfigError,
    GateTimes,
    RgsGeometry,
    TreeGeometry,
)


@dataclass(frozen=True)
class LinkBudget:
    """Component losses, their compositions, and the line lengths behind them.

    ``mu_levels`` holds the composed loss per encoding level (top level
    first); the success and error recursions consume these.  ``mu`` is the
    worst-class composition, kept as a conservative summary.  ``mu_arm`` is
    the arm photons' composed loss, None outside the repeater graph.
    """

    mu_ext: float
    mu_coup: float
    mu_int: float  # worst transmitted class
    mu_del: float
    mu: float
    L_feedback: float  # meters; 0 under the ancilla scheme
    L_delay: float  # meters
    mu_levels: tuple[float, ...] = ()
    mu_int_levels: tuple[float, ...] = ()
    mu_arm: float | None = None


def compose_loss(mu_ext: float, mu_coup: float, mu_int: float, mu_del: float) -> float:
    """Probability a photon is lost to at least one of the four sources."""
    for name, value in (
        ("mu_ext", mu_ext),
        ("mu_coup", mu_coup),
        ("mu_int", mu_int),
        ("mu_del", mu_del),
    ):
        if not 0.0 <= value <= 1.0:
            raise ConfigError(name, f"must be in [0, 1], got {value!r}")
    return 1.0 - (1.0 - mu_ext) * (1.0 - mu_coup) * (1.0 - mu_int) * (1.0 - mu_del)


def mu_ext(protocol: str, L: float, m_nodes: int, L_att: float) -> float:
    """Fiber loss over one transmission segment.

    Trees place m repeater nodes between the end stations; the repeater
    graph places measurement nodes halfway between neighbouring sources, so
    its photons travel half a segment.
    """
    if L <= 0 or L_att <= 0:
        raise ConfigError("L", "distances must be > 0")
    if m_nodes < 0:
        raise ConfigError("m", "must be >= 0")
    segments = m_nodes + 1
    if protocol == "rgs":
        return 1.0 - math.exp(-L / (2.0 * segments * L_att))
    return 1.0 - math.exp(-L / (segments * L_att))


def mu_int(scheme: str, n_feedback: int, L_feedback: float, L_att: float) -> float:
    """Loss accumulated inside the generation process.

    The ancilla scheme never sends photons through fiber while building the
    state; the feedback scheme loops each scattered photon n_feedback times
    through the feedback line.
    """
    if n_feedback not in (0, 1, 2):
        raise ConfigError("n_feedback", "must be 0, 1, or 2")
    if scheme == "ancilla" or n_feedback == 0:
        return 0.0
    return 1.0 - math.exp(-n_feedback * L_feedback / L_att)


def mu_delay(L_delay: float, L_att: float) -> float:
    """Loss in the reordering delay line (applies to every photon)."""
    if L_delay < 0:
        raise ConfigError("L_delay", "must be >= 0")
    return 1.0 - math.exp(-L_delay / L_att)


def n_feedback_for(protocol: str, photon_class: int | str, depth: int) -> int:
    """Feedback-line passes for one photon class.

    ``photon_class`` is the tree level of the photon (1-based) or "arm" for
    the repeater graph's arm photons.  Bottom-level photons are emitted
    directly and never enter the line; photons one level up return once to
    be entangled; anything higher (and the repeater graph's top level,
    which scatters again for the final re-entangling round) returns twice.
    """
    if photon_class == "arm":
        if protocol != "rgs":
            raise ConfigError("photon_class", "arm photons exist only for rgs")
        return 0
    level = int(photon_class)
    if not 1 <= level <= depth:
        raise ConfigError("photon_class", f"level must be in 1..{depth}")
    if protocol == "tree":
        if level == depth:
            return 0
        if level == depth - 1:
            return 1
        return 2
    # rgs encoding tree
    if level == depth:
        return 0
    if level == 1:
        return 2
    return 1


def transmitted_classes(protocol: str, depth: int) -> list[int | str]:
    """Photon classes that leave the source toward the channel."""
    classes: list[int | str] = list(range(1, depth + 1))
    if protocol == "rgs":
        classes.append("arm")
    return classes


def worst_case_n_feedback(protocol: str, depth: int) -> int:
    """Largest pass count over the transmitted classes (conservative default)."""
    return max(
        n_feedback_for(protocol, cls, depth)
        for cls in transmitted_classes(protocol, depth)
    )


def feedback_length(
    protocol: str,
    geometry: TreeGeometry | RgsGeometry,
    gates: GateTimes,
    v_feedback: float,
) -> float:
    """Minimum feedback-line length (meters) for the generation flow.

    The line must hold a level's photons from emission until the emitter has
    produced everything needed before they scatter back; the binding term is
    the top-level round: all nodes of the two highest levels minus the one
    photon being scattered, plus the bottom-level emissions still pending.
    """
    encoding = geometry.encoding if isinstance(geometry, RgsGeometry) else geometry
    d = encoding.depth
    if d < 2:
        raise ConfigError("branchings", "feedback needs depth >= 2")
    b = encoding.branchings
    # node count of level l is the product of branchings above it
    n_top = 1
    for x in b[: d - 1]:
        n_top *= x  # n_{d-1}
    n_above = n_top // b[d - 2]  # n_{d-2}
    bracket = (n_top + n_above - 1) * gates.t_E + b[d - 1] * (n_top - n_above) * gates.t_P
    length = bracket * v_feedback
    if isinstance(geometry, RgsGeometry):
        length *= geometry.n_arms
    return length


def delay_length(
    protocol: str,
    scheme: str,
    geometry: TreeGeometry | RgsGeometry,
    gates: GateTimes,
    v_delay: float,
    L_feedback: float,
) -> float:
    """Delay-line length (meters) that reorders emission into measurement order.

    Feedback flows emit bottom-up, so the hold time is a multiple of the
    feedback loop; ancilla flows hold the deeper photons of one branch while
    the branch's top photon is produced.
    """
    encoding = geometry.encoding if isinstance(geometry, RgsGeometry) else geometry
    d = encoding.depth
    b = encoding.branchings
    if scheme == "feedback":
        if protocol == "rgs":
            divisor = geometry.n_arms if isinstance(geometry, RgsGeometry) else b[0]
            return (d - 1 + 1.0 / divisor) * L_feedback
        return (d - 1 + 1.0 / b[0]) * L_feedback
    if protocol == "tree":
        # one top-level branch: its subtree emissions, the re-encodings of
        # the levels below the root (branch-local node counts), and the
        # stretched top-level photon itself
        prod_sub = 1
        for x in b[1:]:
            prod_sub *= x
        sum_sub = 0
        prod = 1
        for level in range(1, d - 1):
            prod *= b[level]
            sum_sub += prod
        hold = (
            prod_sub * gates.t_P
            + (gates.beta + sum_sub) * gates.t_E
            + sum_sub * gates.t_CZ
        )
        return hold * v_delay
    # rgs/ancilla: one core's full build
    prod_all = 1
    for x in b:
        prod_all *= x
    sum_all = 0
    prod = 1
    for level in range(0, d - 1):
        prod *= b[level]
        sum_all += prod
    hold = (1 + prod_all) * gates.t_P + sum_all * (gates.t_E + gates.t_CZ)
    return hold * v_delay


def build_budget(
    protocol: str,
    scheme: str,
    geometry: TreeGeometry | RgsGeometry,
    gates: GateTimes,
    channel: ChannelParams,
    m: int,
) -> LinkBudget:
    """Assemble the full loss budget for one configuration."""
    encoding = geometry.encoding if isinstance(geometry, RgsGeometry) else geometry
    if scheme == "feedback":
        l_fb = feedback_length(protocol, geometry, gates, channel.v_feedback)
    else:
        l_fb = 0.0
    l_delay = delay_length(protocol, scheme, geometry, gates, channel.v_delay, l_fb)
    ext = mu_ext(protocol, channel.L, m, channel.L_att)
    delay = mu_delay(l_delay, channel.L_att)
    int_levels = []
    levels = []
    for level in range(1, encoding.depth + 1):
        passes = n_feedback_for(protocol, level, encoding.depth)
        internal_l = mu_int(scheme, passes, l_fb, channel.L_att)
        int_levels.append(internal_l)
        levels.append(compose_loss(ext, channel.mu_coup, internal_l, delay))
    arm = None
    if protocol == "rgs":
        arm = compose_loss(ext, channel.mu_coup, 0.0, delay)
    internal = max(int_levels)
    mu = compose_loss(ext, channel.mu_coup, internal, delay)
    return LinkBudget(
        mu_ext=ext,
        mu_coup=channel.mu_coup,
        mu_int=internal,
        mu_del=delay,
        mu=mu,
        L_feedback=l_fb,
        L_delay=l_delay,
        mu_levels=tuple(levels),
        mu_int_levels=tuple(int_levels),
        mu_arm=arm,
    )
