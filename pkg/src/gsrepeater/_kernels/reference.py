"""Pure-Python reference kernels.

Every function here has a compiled twin in ``_core`` (Cython).  The package
imports whichever is available (see ``gsrepeater._kernels``); tests assert the
two implementations agree to near machine precision.  Keep this module free
of package-internal imports so it stays importable on its own.

Conventions used throughout:

* a tree is described by its branching vector ``b`` (children per node at
  levels ``0 .. d-1``); level 0 is the root, level ``d`` the leaves;
* ``mu`` is the per-photon loss probability: a scalar applies to every
  level, a sequence gives one value per level (entry ``i`` for the photons
  at level ``i + 1``, top level first);
* ``eps_sp`` is the effective single-photon measurement error;
* empty products are 1 and levels at or below the leaves contribute
  probability 0 (``0**0 == 1`` is relied upon).
"""

from __future__ import annotations

import math

import numpy as np

IMPL_NAME = "reference"

# Exponent size above which powers switch to exp(n*log(x)) explicitly.
# Keeps the compiled and pure paths bit-for-bit comparable at large m.
_LOG_POW_CUTOFF = 1000.0


def _pow(base: float, exponent: float) -> float:
    if base <= 0.0:
        if exponent == 0.0:
            return 1.0
        return 0.0
    if exponent > _LOG_POW_CUTOFF:
        return math.exp(exponent * math.log(base))
    return base**exponent


def _mu_levels(d: int, mu) -> list[float]:
    """Level-indexed loss: entry ``l`` for level-l photons, zeros outside 1..d."""
    try:
        vals = [float(x) for x in mu]
    except TypeError:
        return [0.0] + [float(mu)] * d + [0.0, 0.0]
    if len(vals) != d:
        raise ValueError(f"need one loss per level, got {len(vals)} for depth {d}")
    return [0.0] + vals + [0.0, 0.0]


def binary_entropy(p: float) -> float:
    """Shannon entropy of a bit, in bits; 0 outside the open interval."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def secret_fraction(fidelity: float) -> float:
    """Asymptotic six-state secret fraction of a Werner pair, signed.

    Negative values mean error correction + privacy amplification consume
    more than the raw key yields; callers clamp at 0 when turning this into
    a rate.  The argument of the conditional-entropy term is clamped into
    [0, 1] so fidelities below 1/3 degrade smoothly instead of raising.
    """
    f = fidelity
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"fidelity must be in [0, 1], got {f!r}")
    if f == 0.0:
        return 0.0
    arg = (3.0 * f - 1.0) / (2.0 * f)
    if arg < 0.0:
        arg = 0.0
    return f - binary_entropy(1.0 - f) - f * binary_entropy(arg)


def indirect_profile(b: tuple[int, ...], mu) -> list[float]:
    """Success probability of reconstructing a Z outcome at each tree level.

    Entry ``k`` is the probability that a lost level-k qubit's Z outcome can
    still be obtained through its descendants.  Returns ``d + 1`` entries;
    the last is 0 (leaves have nothing below them).
    """
    d = len(b)
    ml = _mu_levels(d, mu)
    r = [0.0] * (d + 2)
    bb = list(b) + [0, 0]
    for k in range(d - 1, -1, -1):
        # one branch succeeds when the child arrives and every grandchild
        # is readable either directly or through its own subtree
        cm = ml[k + 1]
        gm = ml[k + 2]
        branch = (1.0 - cm) * (1.0 - gm + gm * r[k + 2]) ** bb[k + 1]
        r[k] = 1.0 - (1.0 - branch) ** bb[k]
    return r[: d + 1]


def tree_node_success(b: tuple[int, ...], mu) -> float:
    """Probability that a single encoded node delivers a decodable X outcome."""
    d = len(b)
    ml = _mu_levels(d, mu)
    r = indirect_profile(b, mu)
    r1 = r[1] if d >= 1 else 0.0
    r2 = r[2] if d >= 2 else 0.0
    b0 = b[0]
    b1 = b[1] if d >= 2 else 0
    mu1 = ml[1]
    mu2 = ml[2]
    # at least one top-level photon must arrive (first bracket); the children
    # of the X-measured one must all be readable (second factor)
    first = (1.0 - mu1 + mu1 * r1) ** b0 - (mu1 * r1) ** b0
    return first * (1.0 - mu2 + mu2 * r2) ** b1


def _parity_error(errors) -> float:
    prod = 1.0
    for e in errors:
        prod *= 1.0 - 2.0 * e
    return 0.5 * (1.0 - prod)


def _majority_error(s: int, e: float) -> float:
    """P(majority of s iid bits, each flipped w.p. e, comes out wrong).

    Exact ties count 1/2 (a coin decides).
    """
    total = 0.0
    for t in range(s + 1):
        w = math.comb(s, t) * e**t * (1.0 - e) ** (s - t)
        if 2 * t > s:
            total += w
        elif 2 * t == s:
            total += 0.5 * w
    return total


def indirect_errors(
    b: tuple[int, ...], mu, eps_sp: float
) -> tuple[list[float], list[float]]:
    """Error rates of the indirect and of the blended Z readouts per level.

    Returns ``(e_ind, z_blend)``, both of length ``d + 1``:

    * ``e_ind[k]`` — error probability of the majority-vote reconstruction
      of a level-k Z outcome, conditioned on it being available;
    * ``z_blend[j]`` — error of the Z outcome actually used for a level-j
      qubit, weighting the indirect route (preferred when available) against
      the plain direct measurement.

    ``e_ind`` is 0 at the leaf level where no reconstruction exists;
    0.5 is reported where the reconstruction never succeeds (weight 0).
    """
    d = len(b)
    ml = _mu_levels(d, mu)
    r = indirect_profile(b, mu) + [0.0]
    bb = list(b) + [0, 0]
    e_ind = [0.0] * (d + 2)

    def blend(j: int) -> float:
        rj = r[j] if j <= d else 0.0
        mj = ml[j] if j <= d + 1 else 0.0
        den = rj + (1.0 - mj) * (1.0 - rj)
        if den <= 0.0:
            return eps_sp
        return (rj * e_ind[j] + (1.0 - mj) * (1.0 - rj) * eps_sp) / den

    for k in range(d - 1, -1, -1):
        z_next = blend(k + 2)
        # a single branch: direct X on the child, parity with Z readouts of
        # every grandchild
        cm = ml[k + 1]
        gm = ml[k + 2]
        prod = (1.0 - 2.0 * eps_sp) * (1.0 - 2.0 * z_next) ** bb[k + 1]
        e_branch = 0.5 * (1.0 - prod)
        p = (1.0 - cm) * (1.0 - gm + gm * r[k + 2]) ** bb[k + 1]
        avail = 1.0 - (1.0 - p) ** bb[k]  # == r[k]
        if avail <= 0.0:
            e_ind[k] = 0.5
            continue
        acc = 0.0
        for s in range(1, bb[k] + 1):
            w = math.comb(bb[k], s) * p**s * (1.0 - p) ** (bb[k] - s)
            acc += w * _majority_error(s, e_branch)
        e_ind[k] = acc / avail

    z_blend = [blend(j) for j in range(d + 1)]
    return e_ind[: d + 1], z_blend


def tree_decoding_error(
    b: tuple[int, ...], mu, eps_sp: float
) -> tuple[float, float]:
    """Probability of decoding a wrong logical X outcome from one tree.

    Returns ``(e_incorrect, e_decoding)``: the unconditional wrong-decode
    probability summed over loss configurations, and the same conditioned on
    the decode succeeding.  ``e_decoding`` is NaN when the success
    probability is 0 (nothing to condition on).

    The configuration sum classifies the ``b0`` top-level qubits as lost-but
    -reconstructed / kept-without-reconstruction / kept-with-reconstruction,
    and the X-measured photon's children as direct or reconstructed; weights
    add up to the node success probability exactly.
    """
    d = len(b)
    b0 = b[0]
    b1 = b[1] if d >= 2 else 0
    ml = _mu_levels(d, mu)
    r = indirect_profile(b, mu)
    r1 = r[1] if d >= 1 else 0.0
    r2 = r[2] if d >= 2 else 0.0
    e_ind, _ = indirect_errors(b, mu, eps_sp)
    e1 = e_ind[1] if d >= 1 else 0.0
    e2 = e_ind[2] if d >= 2 else 0.0
    mu1 = ml[1]
    mu2 = ml[2]

    q_lost_ind = mu1 * r1
    q_direct_only = (1.0 - mu1) * (1.0 - r1)
    q_kept_ind = (1.0 - mu1) * r1
    c_direct = (1.0 - mu2) * (1.0 - r2)
    c_ind = r2

    one_m_2e1 = 1.0 - 2.0 * e1
    one_m_2es = 1.0 - 2.0 * eps_sp
    one_m_2e2 = 1.0 - 2.0 * e2

    e_inc = 0.0
    for lost in range(0, b0):  # at least one survivor is required
        for n in range(0, b0 - lost + 1):
            w1 = (
                math.comb(b0, lost)
                * math.comb(b0 - lost, n)
                * _pow(q_lost_ind, lost)
                * _pow(q_direct_only, n)
                * _pow(q_kept_ind, b0 - lost - n)
            )
            if w1 == 0.0:
                continue
            side = b0 - 1 - n  # reconstructed side readouts next to the X photon
            if side >= 0:
                pe1 = 0.5 * (1.0 + one_m_2es**n * one_m_2e1**side)
            else:
                # the X-measured photon is the lone survivor class; no side
                # readouts exist and the inner sum is empty
                pe1 = 1.0
            for m2 in range(0, b1 + 1):
                w2 = (
                    math.comb(b1, m2)
                    * _pow(c_direct, m2)
                    * _pow(c_ind, b1 - m2)
                )
                if w2 == 0.0:
                    continue
                pe2 = 0.5 * (1.0 + one_m_2es**m2 * one_m_2e2 ** (b1 - m2))
                e_nm = 1.0 - (1.0 - eps_sp) * pe1 * pe2
                e_inc += w1 * w2 * e_nm

    p0 = tree_node_success(b, mu)
    e_dec = e_inc / p0 if p0 > 0.0 else float("nan")
    return e_inc, e_dec


def tree_link(b: tuple[int, ...], mu, eps_sp: float) -> tuple[float, float]:
    """(node success probability, conditional decode error) for one tree."""
    p0 = tree_node_success(b, mu)
    _, e_dec = tree_decoding_error(b, mu, eps_sp)
    return p0, e_dec


def rgs_components(
    n_arms: int, b: tuple[int, ...], mu, mu_arm: float | None = None
) -> tuple[float, float, float, float]:
    """Per-link success factors of the all-photonic repeater link.

    Returns ``(p_bsm, p_x, p_z, p_link)``: the two-photon Bell measurement
    success, the logical X and Z readout availabilities of an encoded core
    qubit, and the whole-link success probability.  ``mu_arm`` is the loss
    of the arm photons; by default they share the bottom encoding level's
    value (both are emitted directly, so uniform input keeps them equal).
    """
    d = len(b)
    ml = _mu_levels(d, mu)
    ma = ml[d] if mu_arm is None else float(mu_arm)
    mu1 = ml[1]
    r = indirect_profile(b, mu)
    p_bsm = 0.5 * (1.0 - ma) ** 2
    p_x = r[0]
    p_z = (1.0 - mu1 + mu1 * r[1]) ** b[0]
    p_link = (
        (1.0 - (1.0 - p_bsm) ** (n_arms // 2)) * p_x**2 * p_z ** (n_arms - 2)
    )
    return p_bsm, p_x, p_z, p_link


def rgs_errors(
    b: tuple[int, ...], mu, eps_sp: float
) -> tuple[float, float]:
    """(e_x, e_z) of an encoded core qubit's logical readouts."""
    e_ind, z_blend = indirect_errors(b, mu, eps_sp)
    e_x = e_ind[0]
    e_z = 0.5 * (1.0 - (1.0 - 2.0 * z_blend[1]) ** b[0])
    return e_x, e_z


def rgs_link(
    n_arms: int, b: tuple[int, ...], mu, eps_sp: float, mu_arm: float | None = None
) -> tuple[float, float]:
    """(link success probability, link fidelity) for one repeater link."""
    _, _, _, p_link = rgs_components(n_arms, b, mu, mu_arm)
    e_x, e_z = rgs_errors(b, mu, eps_sp)
    f_link = (
        (1.0 - eps_sp) ** 2 * (1.0 - e_x) ** 2 * (1.0 - e_z) ** (n_arms - 2)
    )
    return p_link, f_link


def _ft_levels(d: int, fixed_t) -> list[float]:
    """Per-level fixed transmission factors, entry ``l`` for level l."""
    try:
        vals = [float(x) for x in fixed_t]
    except TypeError:
        return [0.0] + [float(fixed_t)] * d
    if len(vals) != d:
        raise ValueError(f"need one factor per level, got {len(vals)} for depth {d}")
    return [0.0] + vals


def _rate_from(r: float, bound: float) -> float:
    return r * bound


def tree_best_m(
    b: tuple[int, ...],
    m1_lo: int,
    m1_hi: int,
    k_ext: float,
    fixed_t,
    eps_sp: float,
    inv_tn: float,
    threshold: float,
) -> tuple[float, int]:
    """Best repeater count for one tree geometry.

    Scans ``m1 = m + 1`` over ``[m1_lo, m1_hi]``; for each, the level-l
    segment loss is ``1 - exp(-k_ext/m1) * fixed_t[l]`` (``fixed_t`` is a
    scalar or one transmission factor per level).  ``inv_tn`` is the
    geometry's rate prefactor (distance normalisation over generation time
    and matter qubits).  The error model is only evaluated when the upper
    bound ``p0^m1 * inv_tn / max(m1-1, 1)`` times the fidelity-capped key
    fraction beats both ``threshold`` and the best refined value so far,
    which cannot change the argmax.  Ties keep the smaller m1.  Returns
    ``(0.0, 0)`` when nothing clears 0/threshold.
    """
    d = len(b)
    ft = _ft_levels(d, fixed_t)
    best_r = 0.0
    best_m1 = 0
    m1s = np.arange(m1_lo, m1_hi + 1)
    seg = np.exp(-k_ext / m1s)
    zero = np.zeros_like(seg)
    mus_l = [zero] * (d + 3)
    for lvl in range(1, d + 1):
        mus_l[lvl] = 1.0 - seg * ft[lvl]

    # vectorized loss-only bound for the whole scan
    r_prof = [np.zeros_like(seg) for _ in range(d + 2)]
    bb = list(b) + [0, 0]
    for k in range(d - 1, -1, -1):
        cm = mus_l[k + 1]
        gm = mus_l[k + 2]
        branch = (1.0 - cm) * (1.0 - gm + gm * r_prof[k + 2]) ** bb[k + 1]
        r_prof[k] = 1.0 - (1.0 - branch) ** bb[k]
    b1 = bb[1]
    mu1 = mus_l[1]
    mu2 = mus_l[2]
    p0s = (
        (1.0 - mu1 + mu1 * r_prof[1]) ** b[0] - (mu1 * r_prof[1]) ** b[0]
    ) * (1.0 - mu2 + mu2 * r_prof[2]) ** b1

    log1m_eps = math.log1p(-eps_sp)
    for i in range(len(m1s)):
        m1 = int(m1s[i])
        # the decoding error never drops below the per-photon error, so
        # (1 - eps_sp)^m1 caps the fidelity and its key fraction caps r
        f_cap = math.exp(m1 * log1m_eps)
        if f_cap <= 0.0:
            break
        r_cap = secret_fraction(f_cap)
        if r_cap <= 0.0:
            break
        p0 = float(p0s[i])
        if p0 <= 0.0:
            continue
        denom = m1 - 1 if m1 > 1 else 1
        bound = math.exp(m1 * math.log(p0)) * inv_tn / denom
        if bound * r_cap <= threshold or bound * r_cap < best_r:
            continue
        mu = [float(mus_l[lvl][i]) for lvl in range(1, d + 1)]
        _, e_dec = tree_decoding_error(b, mu, eps_sp)
        if not e_dec < 1.0:  # NaN or total error: no key
            continue
        fid = math.exp(m1 * math.log1p(-e_dec)) if e_dec > 0.0 else 1.0
        r = secret_fraction(fid)
        if r <= 0.0:
            continue
        rate = _rate_from(r, bound)
        if rate > best_r:
            best_r = rate
            best_m1 = m1
    return best_r, best_m1


def rgs_best_m(
    n_arms: int,
    b: tuple[int, ...],
    m1_lo: int,
    m1_hi: int,
    k_ext: float,
    fixed_t,
    eps_sp: float,
    inv_tn: float,
    threshold: float,
) -> tuple[float, int]:
    """Best source count for one repeater-graph geometry; see tree_best_m.

    The arm photons share the bottom encoding level's transmission factor.
    """
    d = len(b)
    ft = _ft_levels(d, fixed_t)
    best_r = 0.0
    best_m1 = 0
    log1m_eps = math.log1p(-eps_sp)
    for m1 in range(m1_lo, m1_hi + 1):
        # two end photons carry eps_sp each, so (1 - eps_sp)^(2 m1) caps
        # the chain fidelity and its key fraction caps r
        f_cap = math.exp(2.0 * m1 * log1m_eps)
        if f_cap <= 0.0:
            break
        r_cap = secret_fraction(f_cap)
        if r_cap <= 0.0:
            break
        seg = math.exp(-k_ext / m1)
        mu = [1.0 - seg * ft[lvl] for lvl in range(1, d + 1)]
        _, _, _, p_link = rgs_components(n_arms, b, mu)
        if p_link <= 0.0:
            continue
        denom = m1 - 1 if m1 > 1 else 1
        bound = math.exp(m1 * math.log(p_link)) * inv_tn / denom
        if bound * r_cap <= threshold or bound * r_cap < best_r:
            continue
        _, f_link = rgs_link(n_arms, b, mu, eps_sp)
        if not f_link > 0.0:
            continue
        fid = math.exp(m1 * math.log(f_link))
        r = secret_fraction(fid)
        if r <= 0.0:
            continue
        rate = _rate_from(r, bound)
        if rate > best_r:
            best_r = rate
            best_m1 = m1
    return best_r, best_m1
