# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; twin of ``reference`` with identical semantics.

Every public function mirrors the pure-Python implementation line by line
(same guards, same accumulation order) so the two agree to near machine
precision; the parity tests enforce this.  Loss arguments accept a scalar
or one value per tree level (top level first).
"""

from libc.math cimport exp, log, log1p, log2, pow

IMPL_NAME = "compiled"

cdef enum:
    MAXD = 64  # deepest supported tree; far beyond anything useful

cdef double _LOG_POW_CUTOFF = 1000.0


cdef inline double _pow(double base, double exponent):
    if base <= 0.0:
        if exponent == 0.0:
            return 1.0
        return 0.0
    if exponent > _LOG_POW_CUTOFF:
        return exp(exponent * log(base))
    return pow(base, exponent)


cdef double _comb(int n, int k):
    # exact for every intermediate below 2**53: each prefix product is
    # itself a binomial coefficient, so the division never truncates
    cdef double res = 1.0
    cdef int i
    if k < 0 or k > n:
        return 0.0
    if k > n - k:
        k = n - k
    for i in range(1, k + 1):
        res = res * (n - k + i) / i
    return res


cdef int _fill_b(object b, int* out) except -1:
    cdef int d = len(b)
    cdef int i
    if d > MAXD:
        raise ValueError(f"tree depth {d} exceeds supported maximum {MAXD}")
    for i in range(d):
        out[i] = b[i]
    return d


cdef int _fill_mu(object mu, int d, double* ml) except -1:
    # level-indexed loss: ml[l] for levels 1..d, zeros outside
    cdef int l
    cdef int n
    for l in range(d + 3):
        ml[l] = 0.0
    if isinstance(mu, (float, int)):
        for l in range(1, d + 1):
            ml[l] = <double>mu
        return 0
    n = len(mu)
    if n != d:
        raise ValueError(f"need one loss per level, got {n} for depth {d}")
    for l in range(1, d + 1):
        ml[l] = <double>mu[l - 1]
    return 0


def binary_entropy(double p):
    """Shannon entropy of a bit, in bits; 0 outside the open interval."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * log2(p) - (1.0 - p) * log2(1.0 - p)


def secret_fraction(double fidelity):
    """Asymptotic six-state secret fraction of a Werner pair, signed.

    Same conventions as the reference twin: result may be negative, the
    conditional-entropy argument is clamped into [0, 1].
    """
    cdef double f = fidelity
    cdef double arg
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"fidelity must be in [0, 1], got {f!r}")
    if f == 0.0:
        return 0.0
    arg = (3.0 * f - 1.0) / (2.0 * f)
    if arg < 0.0:
        arg = 0.0
    return f - binary_entropy(1.0 - f) - f * binary_entropy(arg)


cdef void _profile_c(int* b, int d, double* ml, double* r):
    # r must hold d + 2 entries; filled with the per-level reconstruction
    # success, r[d] = r[d+1] = 0
    cdef int k
    cdef int bk1
    cdef double branch, cm, gm
    for k in range(d + 2):
        r[k] = 0.0
    for k in range(d - 1, -1, -1):
        bk1 = b[k + 1] if k + 1 < d else 0
        cm = ml[k + 1]
        gm = ml[k + 2]
        branch = (1.0 - cm) * pow(1.0 - gm + gm * r[k + 2], <double>bk1)
        r[k] = 1.0 - pow(1.0 - branch, <double>b[k])


def indirect_profile(object b, object mu):
    """Success probability of reconstructing a Z outcome at each tree level."""
    cdef int bb[MAXD + 2]
    cdef double ml[MAXD + 3]
    cdef double r[MAXD + 2]
    cdef int d = _fill_b(b, bb)
    _fill_mu(mu, d, ml)
    _profile_c(bb, d, ml, r)
    return [r[k] for k in range(d + 1)]


cdef double _node_success_c(int* b, int d, double* ml):
    cdef double r[MAXD + 2]
    cdef double r1, r2, first, mu1, mu2
    cdef int b0, b1
    _profile_c(b, d, ml, r)
    r1 = r[1] if d >= 1 else 0.0
    r2 = r[2] if d >= 2 else 0.0
    b0 = b[0]
    b1 = b[1] if d >= 2 else 0
    mu1 = ml[1]
    mu2 = ml[2]
    first = pow(1.0 - mu1 + mu1 * r1, <double>b0) - _pow(mu1 * r1, <double>b0)
    return first * pow(1.0 - mu2 + mu2 * r2, <double>b1)


def tree_node_success(object b, object mu):
    """Probability that a single encoded node delivers a decodable X outcome."""
    cdef int bb[MAXD + 2]
    cdef double ml[MAXD + 3]
    cdef int d = _fill_b(b, bb)
    _fill_mu(mu, d, ml)
    return _node_success_c(bb, d, ml)


cdef double _majority_error_c(int s, double e):
    cdef double total = 0.0
    cdef double w
    cdef int t
    for t in range(s + 1):
        w = _comb(s, t) * pow(e, <double>t) * pow(1.0 - e, <double>(s - t))
        if 2 * t > s:
            total += w
        elif 2 * t == s:
            total += 0.5 * w
    return total


cdef void _indirect_errors_c(
    int* b, int d, double* ml, double eps_sp, double* e_ind, double* z_blend
):
    # e_ind needs d + 2 entries, z_blend d + 1
    cdef double r[MAXD + 3]
    cdef double z_next, prod, e_branch, p, avail, acc, w, rj, den, cm, gm, mj
    cdef int k, s, bk, bk1, j
    for k in range(d + 3):
        r[k] = 0.0
    _profile_c(b, d, ml, r)
    r[d + 1] = 0.0
    r[d + 2] = 0.0
    for k in range(d + 2):
        e_ind[k] = 0.0

    for k in range(d - 1, -1, -1):
        j = k + 2
        rj = r[j] if j <= d else 0.0
        mj = ml[j] if j <= d + 1 else 0.0
        den = rj + (1.0 - mj) * (1.0 - rj)
        if den <= 0.0:
            z_next = eps_sp
        else:
            z_next = (rj * e_ind[j] + (1.0 - mj) * (1.0 - rj) * eps_sp) / den
        bk1 = b[k + 1] if k + 1 < d else 0
        bk = b[k]
        cm = ml[k + 1]
        gm = ml[k + 2]
        prod = (1.0 - 2.0 * eps_sp) * pow(1.0 - 2.0 * z_next, <double>bk1)
        e_branch = 0.5 * (1.0 - prod)
        p = (1.0 - cm) * pow(1.0 - gm + gm * r[k + 2], <double>bk1)
        avail = 1.0 - pow(1.0 - p, <double>bk)
        if avail <= 0.0:
            e_ind[k] = 0.5
            continue
        acc = 0.0
        for s in range(1, bk + 1):
            w = _comb(bk, s) * pow(p, <double>s) * pow(1.0 - p, <double>(bk - s))
            acc += w * _majority_error_c(s, e_branch)
        e_ind[k] = acc / avail

    for j in range(d + 1):
        rj = r[j] if j <= d else 0.0
        mj = ml[j]
        den = rj + (1.0 - mj) * (1.0 - rj)
        if den <= 0.0:
            z_blend[j] = eps_sp
        else:
            z_blend[j] = (rj * e_ind[j] + (1.0 - mj) * (1.0 - rj) * eps_sp) / den


def indirect_errors(object b, object mu, double eps_sp):
    """Error rates of the indirect and of the blended Z readouts per level."""
    cdef int bb[MAXD + 2]
    cdef double ml[MAXD + 3]
    cdef double e_ind[MAXD + 3]
    cdef double z_blend[MAXD + 3]
    cdef int d = _fill_b(b, bb)
    _fill_mu(mu, d, ml)
    _indirect_errors_c(bb, d, ml, eps_sp, e_ind, z_blend)
    return [e_ind[k] for k in range(d + 1)], [z_blend[k] for k in range(d + 1)]


cdef double _decoding_error_inc_c(int* b, int d, double* ml, double eps_sp):
    cdef double e_ind[MAXD + 3]
    cdef double z_blend[MAXD + 3]
    cdef double r[MAXD + 2]
    cdef double r1, r2, e1, e2, mu1, mu2
    cdef double q_lost_ind, q_direct_only, q_kept_ind, c_direct, c_ind
    cdef double one_m_2e1, one_m_2es, one_m_2e2
    cdef double e_inc, w1, w2, pe1, pe2, s2, s2p
    cdef int b0, b1, lost, n, m2, side
    b0 = b[0]
    b1 = b[1] if d >= 2 else 0
    _profile_c(b, d, ml, r)
    r1 = r[1] if d >= 1 else 0.0
    r2 = r[2] if d >= 2 else 0.0
    _indirect_errors_c(b, d, ml, eps_sp, e_ind, z_blend)
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

    # the child sum does not depend on the side-photon split, so hoist it
    s2 = 0.0
    s2p = 0.0
    for m2 in range(0, b1 + 1):
        w2 = (
            _comb(b1, m2)
            * _pow(c_direct, <double>m2)
            * _pow(c_ind, <double>(b1 - m2))
        )
        if w2 == 0.0:
            continue
        pe2 = 0.5 * (
            1.0 + pow(one_m_2es, <double>m2) * pow(one_m_2e2, <double>(b1 - m2))
        )
        s2 += w2
        s2p += w2 * pe2

    e_inc = 0.0
    for lost in range(0, b0):
        for n in range(0, b0 - lost + 1):
            w1 = (
                _comb(b0, lost)
                * _comb(b0 - lost, n)
                * _pow(q_lost_ind, <double>lost)
                * _pow(q_direct_only, <double>n)
                * _pow(q_kept_ind, <double>(b0 - lost - n))
            )
            if w1 == 0.0:
                continue
            side = b0 - 1 - n
            if side >= 0:
                pe1 = 0.5 * (
                    1.0 + pow(one_m_2es, <double>n) * pow(one_m_2e1, <double>side)
                )
            else:
                pe1 = 1.0
            e_inc += w1 * (s2 - (1.0 - eps_sp) * pe1 * s2p)
    return e_inc


def tree_decoding_error(object b, object mu, double eps_sp):
    """(unconditional, conditional) wrong-decode probability of one tree."""
    cdef int bb[MAXD + 2]
    cdef double ml[MAXD + 3]
    cdef int d = _fill_b(b, bb)
    _fill_mu(mu, d, ml)
    cdef double e_inc = _decoding_error_inc_c(bb, d, ml, eps_sp)
    cdef double p0 = _node_success_c(bb, d, ml)
    cdef double e_dec
    if p0 > 0.0:
        e_dec = e_inc / p0
    else:
        e_dec = float("nan")
    return e_inc, e_dec


def tree_link(object b, object mu, double eps_sp):
    """(node success probability, conditional decode error) for one tree."""
    cdef int bb[MAXD + 2]
    cdef double ml[MAXD + 3]
    cdef int d = _fill_b(b, bb)
    _fill_mu(mu, d, ml)
    cdef double p0 = _node_success_c(bb, d, ml)
    cdef double e_inc = _decoding_error_inc_c(bb, d, ml, eps_sp)
    cdef double e_dec
    if p0 > 0.0:
        e_dec = e_inc / p0
    else:
        e_dec = float("nan")
    return p0, e_dec


cdef void _rgs_components_c(
    int n_arms, int* b, int d, double* ml, double mu_arm,
    double* p_bsm, double* p_x, double* p_z, double* p_link
):
    cdef double r[MAXD + 2]
    cdef double mu1
    _profile_c(b, d, ml, r)
    mu1 = ml[1]
    p_bsm[0] = 0.5 * (1.0 - mu_arm) * (1.0 - mu_arm)
    p_x[0] = r[0]
    p_z[0] = pow(1.0 - mu1 + mu1 * r[1], <double>b[0])
    p_link[0] = (
        (1.0 - pow(1.0 - p_bsm[0], <double>(n_arms // 2)))
        * p_x[0] * p_x[0]
        * pow(p_z[0], <double>(n_arms - 2))
    )


def rgs_components(int n_arms, object b, object mu, object mu_arm=None):
    """(p_bsm, p_x, p_z, p_link) success factors of one repeater-graph link.

    ``mu_arm`` is the arm photons' loss; by default they share the bottom
    encoding level's value.
    """
    cdef int bb[MAXD + 2]
    cdef double ml[MAXD + 3]
    cdef int d = _fill_b(b, bb)
    cdef double ma
    cdef double p_bsm, p_x, p_z, p_link
    _fill_mu(mu, d, ml)
    ma = ml[d] if mu_arm is None else <double>mu_arm
    _rgs_components_c(n_arms, bb, d, ml, ma, &p_bsm, &p_x, &p_z, &p_link)
    return p_bsm, p_x, p_z, p_link


cdef void _rgs_errors_c(int* b, int d, double* ml, double eps_sp,
                        double* e_x, double* e_z):
    cdef double e_ind[MAXD + 3]
    cdef double z_blend[MAXD + 3]
    _indirect_errors_c(b, d, ml, eps_sp, e_ind, z_blend)
    e_x[0] = e_ind[0]
    e_z[0] = 0.5 * (1.0 - pow(1.0 - 2.0 * z_blend[1], <double>b[0]))


def rgs_errors(object b, object mu, double eps_sp):
    """(e_x, e_z) of an encoded core qubit's logical readouts."""
    cdef int bb[MAXD + 2]
    cdef double ml[MAXD + 3]
    cdef int d = _fill_b(b, bb)
    cdef double e_x, e_z
    _fill_mu(mu, d, ml)
    _rgs_errors_c(bb, d, ml, eps_sp, &e_x, &e_z)
    return e_x, e_z


def rgs_link(int n_arms, object b, object mu, double eps_sp, object mu_arm=None):
    """(link success probability, link fidelity) for one repeater link."""
    cdef int bb[MAXD + 2]
    cdef double ml[MAXD + 3]
    cdef int d = _fill_b(b, bb)
    cdef double ma
    cdef double p_bsm, p_x, p_z, p_link, e_x, e_z, f_link
    _fill_mu(mu, d, ml)
    ma = ml[d] if mu_arm is None else <double>mu_arm
    _rgs_components_c(n_arms, bb, d, ml, ma, &p_bsm, &p_x, &p_z, &p_link)
    _rgs_errors_c(bb, d, ml, eps_sp, &e_x, &e_z)
    f_link = (
        pow(1.0 - eps_sp, 2.0)
        * pow(1.0 - e_x, 2.0)
        * pow(1.0 - e_z, <double>(n_arms - 2))
    )
    return p_link, f_link


cdef int _fill_ft(object fixed_t, int d, double* ft) except -1:
    # per-level fixed transmission factors, entry l for level l
    cdef int l
    cdef int n
    for l in range(d + 3):
        ft[l] = 0.0
    if isinstance(fixed_t, (float, int)):
        for l in range(1, d + 1):
            ft[l] = <double>fixed_t
        return 0
    n = len(fixed_t)
    if n != d:
        raise ValueError(f"need one factor per level, got {n} for depth {d}")
    for l in range(1, d + 1):
        ft[l] = <double>fixed_t[l - 1]
    return 0


def tree_best_m(
    object b,
    int m1_lo,
    int m1_hi,
    double k_ext,
    object fixed_t,
    double eps_sp,
    double inv_tn,
    double threshold,
):
    """Best repeater count for one tree geometry; see the reference twin.

    The level-l segment loss at m1 stations is
    ``1 - exp(-k_ext/m1) * fixed_t[l]``.  Refines the error model only
    where the bound ``p0^m1 * inv_tn / max(m1-1, 1)`` times the
    fidelity-capped key fraction clears both the caller's threshold and the
    best refined value so far; this cannot change the argmax because the
    bound dominates the refined rate.  Ties keep the smaller m1.
    """
    cdef int bb[MAXD + 2]
    cdef double ft[MAXD + 3]
    cdef double ml[MAXD + 3]
    cdef int d = _fill_b(b, bb)
    cdef double best_r = 0.0
    cdef int best_m1 = 0
    cdef int m1, lvl
    cdef double seg, p0, denom, bound, e_inc, e_dec, fid, r, rate
    cdef double log1m_eps = log1p(-eps_sp)
    cdef double f_cap, r_cap
    _fill_ft(fixed_t, d, ft)
    for lvl in range(d + 3):
        ml[lvl] = 0.0
    for m1 in range(m1_lo, m1_hi + 1):
        # the decoding error never drops below the per-photon error, so
        # (1 - eps_sp)^m1 caps the fidelity and its key fraction caps r
        f_cap = exp(m1 * log1m_eps)
        if f_cap <= 0.0:
            break
        r_cap = secret_fraction(f_cap)
        if r_cap <= 0.0:
            break
        seg = exp(-k_ext / m1)
        for lvl in range(1, d + 1):
            ml[lvl] = 1.0 - seg * ft[lvl]
        p0 = _node_success_c(bb, d, ml)
        if p0 <= 0.0:
            continue
        denom = m1 - 1 if m1 > 1 else 1
        bound = exp(m1 * log(p0)) * inv_tn / denom
        if bound * r_cap <= threshold or bound * r_cap < best_r:
            continue
        e_inc = _decoding_error_inc_c(bb, d, ml, eps_sp)
        e_dec = e_inc / p0
        if not e_dec < 1.0:
            continue
        fid = exp(m1 * log1p(-e_dec)) if e_dec > 0.0 else 1.0
        r = secret_fraction(fid)
        if r <= 0.0:
            continue
        rate = r * bound
        if rate > best_r:
            best_r = rate
            best_m1 = m1
    return best_r, best_m1


def rgs_best_m(
    int n_arms,
    object b,
    int m1_lo,
    int m1_hi,
    double k_ext,
    object fixed_t,
    double eps_sp,
    double inv_tn,
    double threshold,
):
    """Best source count for one repeater-graph geometry; see tree_best_m.

    The arm photons share the bottom encoding level's transmission factor.
    """
    cdef int bb[MAXD + 2]
    cdef double ft[MAXD + 3]
    cdef double ml[MAXD + 3]
    cdef int d = _fill_b(b, bb)
    cdef double best_r = 0.0
    cdef int best_m1 = 0
    cdef int m1, lvl
    cdef double seg, denom, bound, fid, r, rate
    cdef double p_bsm, p_x, p_z, p_link, e_x, e_z, f_link
    cdef double log1m_eps = log1p(-eps_sp)
    cdef double f_cap, r_cap
    _fill_ft(fixed_t, d, ft)
    for lvl in range(d + 3):
        ml[lvl] = 0.0
    for m1 in range(m1_lo, m1_hi + 1):
        # two end photons carry eps_sp each, so (1 - eps_sp)^(2 m1) caps
        # the chain fidelity and its key fraction caps r
        f_cap = exp(2.0 * m1 * log1m_eps)
        if f_cap <= 0.0:
            break
        r_cap = secret_fraction(f_cap)
        if r_cap <= 0.0:
            break
        seg = exp(-k_ext / m1)
        for lvl in range(1, d + 1):
            ml[lvl] = 1.0 - seg * ft[lvl]
        _rgs_components_c(n_arms, bb, d, ml, ml[d], &p_bsm, &p_x, &p_z, &p_link)
        if p_link <= 0.0:
            continue
        denom = m1 - 1 if m1 > 1 else 1
        bound = exp(m1 * log(p_link)) * inv_tn / denom
        if bound * r_cap <= threshold or bound * r_cap < best_r:
            continue
        _rgs_errors_c(bb, d, ml, eps_sp, &e_x, &e_z)
        f_link = (
            pow(1.0 - eps_sp, 2.0)
            * pow(1.0 - e_x, 2.0)
            * pow(1.0 - e_z, <double>(n_arms - 2))
        )
        if not f_link > 0.0:
            continue
        fid = exp(m1 * log(f_link))
        r = secret_fraction(fid)
        if r <= 0.0:
            continue
        rate = r * bound
        if rate > best_r:
            best_r = rate
            best_m1 = m1
    return best_r, best_m1
