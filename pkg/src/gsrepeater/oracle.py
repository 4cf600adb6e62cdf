"""Brute-force validators for the closed-form success and error models.

Nothing here reuses the analytic recursions: the exhaustive oracle sums
over every photon survival pattern, and the Monte Carlo oracles replay the
measurement strategy on sampled survival/flip patterns -- prefer the
reconstructed (indirect) Z outcome when one is available, majority-vote
across branches with a fair coin on ties, and decode from the first
surviving top-level photon.

Randomness is counter-based Philox ("philox4x64-10"), keyed by
``(seed, chunk_index)`` over fixed-size chunks, so estimates are exactly
reproducible and independent of how many chunks run or where. Bernoulli
draws compare 32-bit integers against ``round(p * 2**32)``; the resulting
probability quantization (below 2.4e-10) is negligible next to Monte Carlo
resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from gsrepeater.params import ConfigError, RgsGeometry, TreeGeometry

ALGORITHM = "philox4x64-10"
CHUNK = 1 << 14  # samples per RNG chunk; fixed so results never depend on batching
EXHAUSTIVE_PHOTON_CAP = 22


@dataclass(frozen=True)
class OracleReport:
    """Point estimate with sampling error.

    For conditional estimates (decoding error given success, link
    infidelity given success) ``trials`` counts the conditioning events,
    not the raw sample draws.
    """

    estimate: float
    std_error: float
    trials: int
    seed: int
    algorithm: str = ALGORITHM


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed, index]))


def _bernoulli(rng: np.random.Generator, p: float, shape) -> np.ndarray:
    threshold = np.uint64(round(p * 4294967296.0))
    draws = rng.integers(0, 1 << 32, size=shape, dtype=np.uint32)
    return (draws.astype(np.uint64) < threshold).astype(np.uint8)


def _group(arr: np.ndarray, k: int) -> np.ndarray:
    """View the last axis as (parents, k children); children are contiguous."""
    return arr.reshape(arr.shape[:-1] + (arr.shape[-1] // k, k))


def _take_node(arr: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """Select one last-axis entry per row, ``idx`` shaped like arr[..., 0]."""
    return np.take_along_axis(arr, idx[..., None], axis=-1)[..., 0]


def _level_sizes(branchings) -> list[int]:
    sizes = []
    n = 1
    for b in branchings:
        n *= b
        sizes.append(n)
    return sizes


# --- exhaustive success probability ----------------------------------------


def exhaustive_tree_success(geometry: TreeGeometry, mu) -> float:
    """Success probability of one tree-encoded logical measurement, m = 0.

    Sums the exact weight of every survival pattern that decodes: at least
    one top-level photon survives, every child of the first surviving one
    is Z-readable, and every other top-level photon is Z-readable. A photon
    is Z-readable when it survived or when some child survived with all of
    that child's children themselves Z-readable.

    ``mu`` is a scalar loss or a per-level sequence (top level first).
    """
    b = geometry.branchings
    d = geometry.depth
    n_ph = geometry.photon_count
    if n_ph > EXHAUSTIVE_PHOTON_CAP:
        raise ConfigError(
            "branchings",
            f"exhaustive enumeration is capped at {EXHAUSTIVE_PHOTON_CAP} photons",
        )
    mus = _mu_list(mu, d)

    sizes = _level_sizes(b)
    idx = np.arange(1 << n_ph, dtype=np.uint32)[:, None]

    # photon bits are laid out level-major, top level first
    surv = []
    offset = 0
    for n_l in sizes:
        shifts = np.arange(offset, offset + n_l, dtype=np.uint32)
        surv.append(((idx >> shifts) & np.uint32(1)).astype(np.uint8))
        offset += n_l

    # zok[li]: level li+1 photon is Z-readable
    zok: list[np.ndarray | None] = [None] * d
    zok[d - 1] = surv[d - 1]
    for li in range(d - 2, -1, -1):
        child_surv = surv[li + 1]
        if li + 2 < d:
            kids_all = np.bitwise_and.reduce(_group(zok[li + 2], b[li + 2]), axis=-1)
            branch_avail = child_surv & kids_all
        else:
            branch_avail = child_surv
        avail = np.bitwise_or.reduce(_group(branch_avail, b[li + 1]), axis=-1)
        zok[li] = surv[li] | avail

    top = surv[0].astype(bool)
    any_surv = top.any(axis=-1)
    first = np.argmax(top, axis=-1)
    all_zok = np.bitwise_and.reduce(zok[0], axis=-1).astype(bool)
    if d >= 2:
        kids_all_top = np.bitwise_and.reduce(_group(zok[1], b[1]), axis=-1)
        first_kids_ok = _take_node(kids_all_top, first).astype(bool)
    else:
        first_kids_ok = np.ones_like(any_surv)
    success = any_surv & all_zok & first_kids_ok

    weights = np.ones(1 << n_ph)
    for li, n_l in enumerate(sizes):
        ones = surv[li].sum(axis=-1, dtype=np.int64)
        weights *= np.power(1.0 - mus[li], ones) * np.power(mus[li], n_l - ones)
    return float(weights[success].sum())


# --- shared Monte Carlo tree machinery --------------------------------------


def _mu_list(mu, d: int) -> list[float]:
    """Scalar or per-level loss (top level first) as a validated list."""
    mus = [float(m) for m in mu] if np.ndim(mu) else [float(mu)] * d
    if len(mus) != d:
        raise ConfigError("mu", f"need one loss per level ({d}), got {len(mus)}")
    for m in mus:
        if not 0.0 <= m <= 1.0:
            raise ConfigError("mu", "must be in [0, 1]")
    return mus


def _sample_tree(rng, lead: tuple, b, mus: list[float], eps_sp: float):
    """Draw survival, measurement-flip and tie-break arrays per level.

    Draw order is fixed (per level: survival, flip, then the tie coin for
    levels that can be measured indirectly) so a chunk's stream never
    depends on outcomes. Tie coins are always drawn even when no tie
    occurs.
    """
    d = len(b)
    surv, flip, coin = [], [], []
    n = 1
    for li in range(d):
        n *= b[li]
        shape = lead + (n,)
        surv.append(_bernoulli(rng, 1.0 - mus[li], shape))
        flip.append(_bernoulli(rng, eps_sp, shape))
        coin.append(_bernoulli(rng, 0.5, shape) if li < d - 1 else None)
    return surv, flip, coin


def _vote(branch_avail, branch_err, per_parent: int, coin):
    """Majority vote over available branches; ties fall to the coin."""
    votes = _group(branch_avail, per_parent).sum(axis=-1, dtype=np.int16)
    ones = _group(branch_avail & branch_err, per_parent).sum(axis=-1, dtype=np.int16)
    tie = (votes > 0) & (ones * 2 == votes)
    err = ((ones * 2 > votes) | (tie & coin.astype(bool))).astype(np.uint8)
    avail = (votes > 0).astype(np.uint8)
    return avail, err


def _decode_tree(surv, flip, coin, b):
    """Per-level Z-readability and the error of the preferred Z outcome.

    Returns (zok, used): lists indexed by level-1, where ``used[li]`` is
    the flip of the Z value actually consumed for that photon -- the
    indirect reconstruction when available, else the direct measurement.
    Entries are only meaningful where ``zok`` is set.
    """
    d = len(b)
    zok: list[np.ndarray | None] = [None] * d
    used: list[np.ndarray | None] = [None] * d
    zok[d - 1] = surv[d - 1]
    used[d - 1] = flip[d - 1]
    for li in range(d - 2, -1, -1):
        child_surv = surv[li + 1]
        child_flip = flip[li + 1]
        if li + 2 < d:
            kids_all = np.bitwise_and.reduce(_group(zok[li + 2], b[li + 2]), axis=-1)
            kids_par = np.bitwise_xor.reduce(_group(used[li + 2], b[li + 2]), axis=-1)
            branch_avail = child_surv & kids_all
            branch_err = child_flip ^ kids_par
        else:
            branch_avail = child_surv
            branch_err = child_flip
        avail, err_ind = _vote(branch_avail, branch_err, b[li + 1], coin[li])
        zok[li] = surv[li] | avail
        used[li] = np.where(avail.astype(bool), err_ind, flip[li])
    return zok, used


def _root_vote(surv, flip, coin0, zok, used, b):
    """Indirect measurement of the parent qubit via the top-level photons."""
    d = len(b)
    if d >= 2:
        kids_all = np.bitwise_and.reduce(_group(zok[1], b[1]), axis=-1)
        kids_par = np.bitwise_xor.reduce(_group(used[1], b[1]), axis=-1)
        branch_avail = surv[0] & kids_all
        branch_err = flip[0] ^ kids_par
    else:
        branch_avail = surv[0]
        branch_err = flip[0]
    avail, err = _vote(branch_avail, branch_err, b[0], coin0[..., None])
    return avail[..., 0], err[..., 0]


def _report(err_count: int, base_count: int, seed: int) -> OracleReport:
    if base_count == 0:
        return OracleReport(math.nan, math.nan, 0, seed)
    p = err_count / base_count
    return OracleReport(p, math.sqrt(p * (1.0 - p) / base_count), base_count, seed)


# --- Monte Carlo oracles ----------------------------------------------------


def mc_tree_logical_error(
    geometry: TreeGeometry, mu, eps_sp: float, trials: int, seed: int = 0
) -> OracleReport:
    """Decoding error of one tree-encoded logical measurement, given success.

    Each sample draws loss and single-photon measurement flips, then
    decodes from the first surviving top-level photon: its own measurement,
    the preferred Z outcomes of the other top-level photons, and the
    preferred Z outcomes of its children. The sample counts as an error if
    the direct measurement flipped, or either parity came out odd.
    ``mu`` is a scalar loss or a per-level sequence (top level first).
    """
    b = geometry.branchings
    d = geometry.depth
    if d < 2:
        raise ConfigError("branchings", "logical decoding needs depth >= 2")
    mus = _mu_list(mu, d)
    if trials <= 0:
        raise ConfigError("trials", "must be positive")

    n_succ = 0
    n_err = 0
    n_chunks = (trials + CHUNK - 1) // CHUNK
    for ci in range(n_chunks):
        rng = _chunk_rng(seed, ci)
        surv, flip, coin = _sample_tree(rng, (CHUNK,), b, mus, eps_sp)
        rows = min(CHUNK, trials - ci * CHUNK)
        zok, used = _decode_tree(surv, flip, coin, b)

        top = surv[0].astype(bool)
        any_surv = top.any(axis=-1)
        first = np.argmax(top, axis=-1)
        all_zok = np.bitwise_and.reduce(zok[0], axis=-1).astype(bool)
        kids_all = np.bitwise_and.reduce(_group(zok[1], b[1]), axis=-1)
        kids_par = np.bitwise_xor.reduce(_group(used[1], b[1]), axis=-1)
        success = any_surv & all_zok & _take_node(kids_all, first).astype(bool)

        own = _take_node(flip[0], first).astype(bool)
        side = (np.bitwise_xor.reduce(used[0], axis=-1) ^ _take_node(used[0], first)).astype(bool)
        kids = _take_node(kids_par, first).astype(bool)
        err = own | side | kids

        success = success[:rows]
        err = err[:rows] & success
        n_succ += int(success.sum())
        n_err += int(err.sum())
    return _report(n_err, n_succ, seed)


def mc_rgs_link(
    geometry: RgsGeometry,
    mu,
    eps_sp: float,
    trials: int,
    seed: int = 0,
    mu_arm: float | None = None,
) -> tuple[OracleReport, OracleReport]:
    """Connection probability and infidelity of one repeater-graph-state link.

    Each sample draws the N/2 photon-pair fusion attempts (both arm photons
    must arrive, then a fair coin for the fusion), two cores measured
    indirectly in X, and N - 2 cores read out in Z through their trees. The
    first successful fusion supplies the two arm measurements that enter
    the error. Returns ``(success, infidelity)`` reports; the infidelity
    estimate is conditioned on success.  ``mu`` is a scalar loss or one
    value per encoding level; ``mu_arm`` overrides the arm photons' loss
    (default: the bottom level's value).
    """
    n_arms = geometry.n_arms
    b = geometry.encoding.branchings
    mus = _mu_list(mu, len(b))
    ma = mus[-1] if mu_arm is None else float(mu_arm)
    if not 0.0 <= ma <= 1.0:
        raise ConfigError("mu_arm", "must be in [0, 1]")
    if trials <= 0:
        raise ConfigError("trials", "must be positive")
    half = n_arms // 2

    n_total = 0
    n_succ = 0
    n_err = 0
    n_chunks = (trials + CHUNK - 1) // CHUNK
    for ci in range(n_chunks):
        rng = _chunk_rng(seed, ci)
        pair_surv = _bernoulli(rng, 1.0 - ma, (CHUNK, half, 2))
        pair_coin = _bernoulli(rng, 0.5, (CHUNK, half))
        pair_flip = _bernoulli(rng, eps_sp, (CHUNK, half, 2))
        surv, flip, coin = _sample_tree(rng, (CHUNK, n_arms), b, mus, eps_sp)
        coin0 = _bernoulli(rng, 0.5, (CHUNK, n_arms))
        rows = min(CHUNK, trials - ci * CHUNK)

        zok, used = _decode_tree(surv, flip, coin, b)
        avail0, err0 = _root_vote(surv, flip, coin0, zok, used, b)

        fused = (pair_surv[..., 0] & pair_surv[..., 1] & pair_coin).astype(bool)
        any_fused = fused.any(axis=-1)
        first_pair = np.argmax(fused, axis=-1)
        arm_flips = np.take_along_axis(pair_flip, first_pair[:, None, None], axis=1)[:, 0, :]

        x_ok = avail0[:, :2].astype(bool).all(axis=-1)
        z_ok = np.bitwise_and.reduce(zok[0][:, 2:, :], axis=-1).astype(bool).all(axis=-1)
        success = any_fused & x_ok & z_ok

        z_par = np.bitwise_xor.reduce(used[0][:, 2:, :], axis=-1).astype(bool)
        err = (
            arm_flips.astype(bool).any(axis=-1)
            | err0[:, :2].astype(bool).any(axis=-1)
            | z_par.any(axis=-1)
        )

        success = success[:rows]
        err = err[:rows] & success
        n_total += rows
        n_succ += int(success.sum())
        n_err += int(err.sum())

    p = n_succ / n_total
    success_report = OracleReport(
        p, math.sqrt(p * (1.0 - p) / n_total), n_total, seed
    )
    return success_report, _report(n_err, n_succ, seed)
