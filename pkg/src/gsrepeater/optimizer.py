"""Discrete search for the best repeater setup, grid sweeps, distance scans.

The search space is small enough (depths 2-3, bounded branchings, even arm
counts, up to 1200 stations) for exhaustive evaluation; a loss-only upper
bound prunes most of it.  The bound never skips a potential winner: for
every geometry and station count, rate = r * bound with r <= 1, so a
candidate whose bound loses to the incumbent cannot beat it.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from gsrepeater import _kernels, keyrate, lossmodel, timing
from gsrepeater.params import (
    DEFAULT_BETA,
    DEFAULT_T_CZ_A_S,
    DEFAULT_T_H_S,
    ChannelParams,
    ConfigError,
    EmitterParams,
    RgsGeometry,
    RunConfig,
    TreeGeometry,
    derive_gate_times,
)

# Fig. 4-style distance scans fix the emitter at these values by default.
SCAN_GAMMA_GHZ = 10.0
SCAN_TCOH_S = 1e-3


@dataclass(frozen=True)
class SearchSpace:
    """Bounds of the exhaustive search; defaults cover the observed optima."""

    tree_depths: tuple[int, ...] = (2, 3)
    b_min: int = 1
    b_max: int = 30
    n_arms: tuple[int, ...] = tuple(range(2, 49, 2))
    encoding_depth: int = 2
    m1_min: int = 1
    m1_max: int = 1200

    def __post_init__(self):
        if not self.tree_depths or any(d < 2 for d in self.tree_depths):
            raise ConfigError("tree_depths", "need at least one depth >= 2")
        if not 1 <= self.b_min <= self.b_max:
            raise ConfigError("b_min", "need 1 <= b_min <= b_max")
        if not self.n_arms or any(n < 2 or n % 2 for n in self.n_arms):
            raise ConfigError("n_arms", "need even arm counts >= 2")
        if self.encoding_depth < 2:
            raise ConfigError("encoding_depth", "must be >= 2")
        if not 1 <= self.m1_min <= self.m1_max:
            raise ConfigError("m1_min", "need 1 <= m1_min <= m1_max")


@dataclass(frozen=True)
class OptimumRecord:
    """Winner of one search; empty searches report a zero-rate record."""

    protocol: str
    scheme: str
    gamma_ghz: float
    tcoh_s: float
    R_eff: float
    spacing_km: float
    geometry: str
    m: int
    n: int
    L_feedback: float  # meters
    L_delay: float  # meters
    secure: bool
    config: RunConfig | None = None

    def to_row(self) -> dict:
        return {
            "gamma_ghz": self.gamma_ghz,
            "tcoh_s": self.tcoh_s,
            "protocol": self.protocol,
            "scheme": self.scheme,
            "reff_hz": self.R_eff,
            "spacing_km": self.spacing_km,
            "geometry": self.geometry,
            "m": self.m,
            "n": self.n,
            "L_feedback_m": self.L_feedback,
            "L_delay_m": self.L_delay,
            "secure": self.secure,
        }


CSV_COLUMNS = (
    "gamma_ghz",
    "tcoh_s",
    "protocol",
    "scheme",
    "reff_hz",
    "spacing_km",
    "geometry",
    "m",
    "n",
    "L_feedback_m",
    "L_delay_m",
    "secure",
)


def _tree_candidates(space: SearchSpace) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    for d in sorted(set(space.tree_depths)):
        dims = [range(space.b_min, space.b_max + 1)] * d
        stack = [()]
        for dim in dims:
            stack = [s + (b,) for s in stack for b in dim]
        out.extend(stack)
    # deterministic preference order: fewer photons first, then lexicographic
    out.sort(key=lambda b: (TreeGeometry(b).photon_count, b))
    return out


def _rgs_candidates(space: SearchSpace) -> list[tuple[int, tuple[int, ...]]]:
    trees = _tree_candidates(replace(space, tree_depths=(space.encoding_depth,)))
    out = [(n, b) for n in sorted(set(space.n_arms)) for b in trees]
    out.sort(key=lambda nb: (RgsGeometry(nb[0], TreeGeometry(nb[1])).photon_count, nb))
    return out


def _matter_count(protocol: str, scheme: str, depth: int, n_matter: int | None) -> int:
    if n_matter is not None:
        return n_matter
    if scheme == "feedback":
        return 1
    return depth if protocol == "tree" else depth + 1


def _geometry_setup(
    protocol: str,
    scheme: str,
    geometry: TreeGeometry | RgsGeometry,
    gates,
    channel: ChannelParams,
    t_coh: float,
    n_matter: int | None,
    include_cz_error: bool,
    beta: float,
):
    """Station-count-independent pieces of the rate formula for one geometry.

    Returns (inv_tn, k_ext, fixed_t, eps_sp) where the level-l segment loss
    at m+1 stations is 1 - exp(-k_ext/(m+1)) * fixed_t[l] and the rate
    bound is p_succ^(m+1) * inv_tn / max(m, 1).  Only the fiber term
    depends on the station count, so the per-level internal losses fold
    into the fixed transmission factors.
    """
    budget = lossmodel.build_budget(protocol, scheme, geometry, gates, channel, 0)
    tim = timing.generation_time(protocol, scheme, geometry, gates)
    decoh = keyrate.eps_decoh(tim.T_graph, t_coh, tim.N_ph)
    depol = channel.eps_depol
    if include_cz_error:
        depol = min(0.75, keyrate.compose_depol(depol, keyrate.eps_cz(beta)))
    sp = keyrate.eps_sp(decoh, depol)
    encoding = geometry.encoding if isinstance(geometry, RgsGeometry) else geometry
    n = _matter_count(protocol, scheme, encoding.depth, n_matter)
    inv_tn = (channel.L / channel.L_att) / (tim.T_graph * n)
    fixed_t = tuple(
        (1.0 - budget.mu_coup) * (1.0 - mu_int_l) * (1.0 - budget.mu_del)
        for mu_int_l in budget.mu_int_levels
    )
    k_ext = channel.L / channel.L_att
    if protocol == "rgs":
        k_ext /= 2.0
    return inv_tn, k_ext, fixed_t, sp


def optimize(
    protocol: str,
    scheme: str,
    emitter: EmitterParams,
    channel: ChannelParams | None = None,
    space: SearchSpace | None = None,
    *,
    beta: float = DEFAULT_BETA,
    t_H: float = DEFAULT_T_H_S,
    t_CZ_a: float = DEFAULT_T_CZ_A_S,
    n_matter: int | None = None,
    include_cz_error: bool = False,
    prune: bool = True,
) -> OptimumRecord:
    """Exhaustive search over the space; returns the R_eff argmax.

    Ties break toward fewer photons, then lexicographic geometry, then
    smaller station count (the scan order, with strict improvement only).
    With nothing secure anywhere, the record carries R_eff = 0 and no
    config.
    """
    channel = channel or ChannelParams()
    space = space or SearchSpace()
    gates = derive_gate_times(emitter, scheme, beta, t_H, t_CZ_a)

    best_rate = 0.0
    best: tuple[TreeGeometry | RgsGeometry, int] | None = None

    if protocol == "tree":
        candidates: list = _tree_candidates(space)
    else:
        candidates = _rgs_candidates(space)

    for cand in candidates:
        if protocol == "tree":
            geometry: TreeGeometry | RgsGeometry = TreeGeometry(cand)
        else:
            geometry = RgsGeometry(cand[0], TreeGeometry(cand[1]))
        inv_tn, k_ext, fixed_t, sp = _geometry_setup(
            protocol, scheme, geometry, gates, channel, emitter.t_coh,
            n_matter, include_cz_error, beta,
        )
        if prune and inv_tn <= best_rate:
            continue  # even a lossless, perfect-fidelity setup loses
        # The decoding error can never drop below the per-photon error, so
        # F <= (1 - eps_sp)^(m+1) <= 1 - eps_sp at every station count.  A
        # geometry whose floor is already below the key threshold is dead.
        if sp >= 1.0 or keyrate.secret_fraction(1.0 - sp) <= 0.0:
            continue
        threshold = best_rate if prune else 0.0
        if protocol == "tree":
            rate, m1 = _kernels.tree_best_m(
                cand, space.m1_min, space.m1_max, k_ext, fixed_t, sp, inv_tn, threshold
            )
        else:
            rate, m1 = _kernels.rgs_best_m(
                cand[0], cand[1], space.m1_min, space.m1_max,
                k_ext, fixed_t, sp, inv_tn, threshold,
            )
        if m1 > 0 and rate > best_rate:
            best_rate = rate
            best = (geometry, m1)

    gamma_ghz = emitter.gamma_ghz
    if best is None:
        return OptimumRecord(
            protocol=protocol,
            scheme=scheme,
            gamma_ghz=gamma_ghz,
            tcoh_s=emitter.t_coh,
            R_eff=0.0,
            spacing_km=0.0,
            geometry="",
            m=0,
            n=0,
            L_feedback=0.0,
            L_delay=0.0,
            secure=False,
        )

    geometry, m1 = best
    config = RunConfig(
        protocol=protocol,
        scheme=scheme,
        emitter=emitter,
        channel=channel,
        geometry=geometry,
        m=m1 - 1,
        beta=beta,
        t_H=t_H,
        t_CZ_a=t_CZ_a,
        n_matter=n_matter,
        include_cz_error=include_cz_error,
    )
    res = keyrate.evaluate(config)
    return OptimumRecord(
        protocol=protocol,
        scheme=scheme,
        gamma_ghz=gamma_ghz,
        tcoh_s=emitter.t_coh,
        R_eff=res.R_eff,
        spacing_km=channel.L / 1000.0 / m1,
        geometry=geometry.canonical(),
        m=m1 - 1,
        n=res.n,
        L_feedback=res.link.L_feedback,
        L_delay=res.link.L_delay,
        secure=res.secure,
        config=config,
    )


def normalized_difference(r_feedback: float, r_ancilla: float) -> float:
    """(R_f - R_a)/(R_f + R_a); 0 when both rates vanish."""
    if r_feedback < 0 or r_ancilla < 0:
        raise ConfigError("rates", "must be >= 0")
    total = r_feedback + r_ancilla
    if total == 0.0:
        return 0.0
    return (r_feedback - r_ancilla) / total


def _sweep_point(args) -> tuple[int, OptimumRecord]:
    (index, protocol, scheme, gamma_ghz, tcoh_s, channel, space, kwargs) = args
    emitter = EmitterParams.from_ghz(gamma_ghz, tcoh_s)
    return index, optimize(protocol, scheme, emitter, channel, space, **kwargs)


def _run_points(points, parallelism: int | None) -> list[OptimumRecord]:
    workers = parallelism if parallelism is not None else (os.cpu_count() or 1)
    workers = max(1, min(workers, len(points)))
    if workers == 1:
        indexed = [_sweep_point(p) for p in points]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            indexed = list(pool.map(_sweep_point, points))
    indexed.sort(key=lambda pair: pair[0])
    return [rec for _, rec in indexed]


def sweep(
    protocol: str,
    scheme: str,
    gamma_ghz_grid,
    tcoh_grid,
    channel: ChannelParams | None = None,
    space: SearchSpace | None = None,
    *,
    parallelism: int | None = None,
    **kwargs,
) -> list[OptimumRecord]:
    """One optimize per (gamma, t_coh) grid point, gamma-major row order.

    Grid points run in worker processes; the merged result is ordered by
    grid index and independent of worker count.
    """
    gammas = list(gamma_ghz_grid)
    tcohs = list(tcoh_grid)
    if not gammas or not tcohs:
        raise ConfigError("grid", "grids must be nonempty")
    points = []
    index = 0
    for g in gammas:
        for t in tcohs:
            points.append((index, protocol, scheme, g, t, channel, space, kwargs))
            index += 1
    return _run_points(points, parallelism)


def distance_scan(
    protocol: str,
    scheme: str,
    emitter: EmitterParams | None,
    L_values,
    channel: ChannelParams | None = None,
    space: SearchSpace | None = None,
    *,
    parallelism: int | None = None,
    **kwargs,
) -> list[OptimumRecord]:
    """One optimize per total distance (meters), order preserved."""
    emitter = emitter or EmitterParams.from_ghz(SCAN_GAMMA_GHZ, SCAN_TCOH_S)
    base = channel or ChannelParams()
    lengths = [float(L) for L in L_values]
    if not lengths:
        raise ConfigError("L", "need at least one distance")
    if any(L <= 0 for L in lengths):
        raise ConfigError("L", "distances must be > 0")
    points = []
    for i, L in enumerate(lengths):
        ch = replace(base, L=L)
        points.append(
            (i, protocol, scheme, emitter.gamma_ghz, emitter.t_coh, ch, space, kwargs)
        )
    return _run_points(points, parallelism)


# --- artifact writers -------------------------------------------------------


def _provenance_lines(provenance: dict) -> list[str]:
    lines = []
    for key, value in provenance.items():
        lines.append(f"# {key} = {value}")
    return lines


def _serialize(value):
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return value


def _rows(records: list[OptimumRecord], extra: dict | None):
    for key, column in (extra or {}).items():
        if len(column) != len(records):
            raise ConfigError(key, "extra column length must match record count")
    for i, rec in enumerate(records):
        row = rec.to_row()
        for key, column in (extra or {}).items():
            row[key] = column[i]
        yield row


def write_csv(
    path,
    records: list[OptimumRecord],
    provenance: dict | None = None,
    extra: dict | None = None,
) -> None:
    """CSV artifact: '#' provenance header, then one row per record.

    `extra` maps trailing column names to per-record value lists (distance
    scans append L_km this way).  Content is a pure function of the inputs
    (no timestamps), so reruns are byte-identical.
    """
    columns = CSV_COLUMNS + tuple(extra or ())
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in _provenance_lines(provenance or {}):
            fh.write(line + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in _rows(records, extra):
            writer.writerow([_serialize(row[c]) for c in columns])


def write_json(
    path,
    records: list[OptimumRecord],
    provenance: dict | None = None,
    extra: dict | None = None,
) -> None:
    """JSON mirror of the CSV artifact, same rows and provenance."""
    payload = {
        "provenance": provenance or {},
        "rows": list(_rows(records, extra)),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=False)
        fh.write("\n")
