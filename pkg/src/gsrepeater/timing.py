"""Closed-form graph-state generation times and photon counts."""

from __future__ import annotations

from dataclasses import dataclass

from gsrepeater.params import ConfigError, GateTimes, RgsGeometry, TreeGeometry


@dataclass(frozen=True)
class TimingResult:
    T_graph: float  # seconds
    N_ph: int  # photons in the state (tree root excluded, arms included)


def photon_count(geometry: TreeGeometry | RgsGeometry) -> int:
    return geometry.photon_count


def _level_products(b: tuple[int, ...]) -> list[int]:
    """Cumulative products Π_{i=0}^{l} b_i for l = 0..d-1."""
    out = []
    prod = 1
    for x in b:
        prod *= x
        out.append(prod)
    return out


def generation_time(
    protocol: str,
    scheme: str,
    geometry: TreeGeometry | RgsGeometry,
    gates: GateTimes,
) -> TimingResult:
    """Emitter-sequential generation time of the full graph state.

    Each branch is produced depth-first: bottom photons by plain emissions,
    upper levels by entangling returns (feedback) or ancilla re-encodings
    (ancilla), with the scheme's own CZ accounting.  The repeater graph
    repeats its core recipe N times and ends with one spin measurement.
    """
    encoding = geometry.encoding if isinstance(geometry, RgsGeometry) else geometry
    b = encoding.branchings
    d = encoding.depth
    if d < 2:
        raise ConfigError("branchings", "generation times need depth >= 2")
    prods = _level_products(b)
    all_photons = prods[-1]  # bottom-level emissions per tree
    # nodes at levels 1..d-1: one re-encoding/entangling step each
    interior = sum(prods[: d - 1])

    if protocol == "tree":
        if scheme == "ancilla":
            # top-level photons are stretched by beta for the late CZ
            t = (
                all_photons * gates.t_P
                + (gates.beta * b[0] + (interior - b[0])) * gates.t_E
                + interior * gates.t_CZ
            )
        else:
            t = all_photons * gates.t_P + interior * (gates.t_E + gates.t_CZ)
        return TimingResult(T_graph=t, N_ph=geometry.photon_count)

    n_arms = geometry.n_arms  # type: ignore[union-attr]
    if scheme == "ancilla":
        per_core = (
            (1 + all_photons) * gates.t_P
            + interior * gates.t_E
            + (2 + interior) * gates.t_CZ
            + 2 * gates.t_M
        )
        t = n_arms * per_core + gates.t_M
    else:
        per_core = (
            all_photons * gates.t_P
            + (1.0 / gates.beta + interior) * gates.t_E
            + (b[0] + interior) * gates.t_CZ
        )
        t = n_arms * per_core + gates.t_M
    return TimingResult(T_graph=t, N_ph=geometry.photon_count)
