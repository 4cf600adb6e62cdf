"""Single-configuration evaluation: error budget, secret fraction, key rate.

Composes the loss budget, success probability, generation timing and
photon-error channels into one effective secret key rate

    R_eff = r * P_succ * (1 / T_graph) * (1 / (m * n)) * (L / L_att)

normalized per matter qubit, repeater station and attenuation length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from gsrepeater import _kernels, lossmodel, rgs_analytics, timing, tree_analytics
from gsrepeater.lossmodel import LinkBudget
from gsrepeater.params import ConfigError, RunConfig

binary_entropy = _kernels.binary_entropy

# below this fidelity one entropy argument leaves [0, 1] and no key survives
SECRET_FRACTION_DOMAIN = 1.0 / 3.0


def eps_decoh(T_graph: float, t_coh: float, N_ph: int) -> float:
    """Average depolarization from spin dephasing during generation.

    Each photon's effective exposure is the graph build time divided by the
    photon count; an infinite coherence time gives 0, the opposite limit
    the fully mixed 3/4.
    """
    if T_graph <= 0 or N_ph <= 0:
        raise ConfigError("T_graph", "time and photon count must be positive")
    if t_coh <= 0:
        raise ConfigError("t_coh", "must be positive (inf allowed)")
    if math.isinf(t_coh):
        return 0.0
    return 0.75 * (1.0 - math.exp(-T_graph / (t_coh * N_ph)))


def eps_sp(eps_decoh: float, eps_depol: float) -> float:
    """Single-photon measurement error from two composed depolarizations."""
    for name, value in (("eps_decoh", eps_decoh), ("eps_depol", eps_depol)):
        if not 0.0 <= value <= 0.75:
            raise ConfigError(name, "must be in [0, 3/4]")
    return (2.0 / 3.0) * (eps_decoh + eps_depol - (4.0 / 3.0) * eps_decoh * eps_depol)


def eps_cz(beta: float) -> float:
    """Leading-order infidelity of the scattering-based CZ gate.

    Reported raw (2/beta^2 can exceed 1 for beta < sqrt(2)); callers decide
    whether it is negligible for their bandwidth ratio.
    """
    if beta < 1.0:
        raise ConfigError("beta", "must be >= 1")
    return 2.0 / (beta * beta)


def compose_depol(a: float, b: float) -> float:
    """Depolarization probability of two such channels in sequence."""
    return a + b - (4.0 / 3.0) * a * b


def secret_fraction(F: float) -> float:
    """Asymptotic secret fraction of the six-state protocol at fidelity F.

    Clamped to [0, 1]; fidelities at or below 1/3 (where the phase-error
    argument leaves its domain) yield 0.
    """
    if not 0.0 < F <= 1.0:
        raise ConfigError("F", "must be in (0, 1]")
    if F <= SECRET_FRACTION_DOMAIN:
        return 0.0
    return max(0.0, _kernels.secret_fraction(F))


def fidelity_threshold(lo: float = 0.85, hi: float = 0.90, tol: float = 1e-9) -> float:
    """Smallest fidelity with a positive secret fraction, by bisection."""
    if not (secret_fraction(lo) == 0.0 and secret_fraction(hi) > 0.0):
        raise ConfigError("lo", "bracket must straddle the threshold")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if secret_fraction(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class ErrorBudget:
    """Error channels feeding one configuration's fidelity."""

    eps_depol: float
    eps_decoh: float
    eps_sp: float
    eps_CZ: float
    F: float
    r: float


@dataclass(frozen=True)
class EvalResult:
    """Everything downstream consumers need about one configuration."""

    P_succ: float
    F: float
    r: float
    T_graph: float
    N_ph: int
    n: int
    m: int
    R_eff: float
    secure: bool
    budget: ErrorBudget
    link: LinkBudget
    flags: tuple[str, ...]
    clamp_events: int
    config: RunConfig

    def to_record(self) -> dict:
        """Flat, JSON-compatible summary with stable field names."""
        cfg = self.config
        return {
            "protocol": cfg.protocol,
            "scheme": cfg.scheme,
            "gamma_ghz": cfg.emitter.gamma_ghz,
            "tcoh_s": cfg.emitter.t_coh,
            "L_km": cfg.channel.L / 1000.0,
            "L_att_km": cfg.channel.L_att / 1000.0,
            "geometry": cfg.geometry.canonical(),
            "m": self.m,
            "n": self.n,
            "spacing_km": cfg.channel.L / 1000.0 / (max(self.m, 1) + 1),
            "mu": self.link.mu,
            "mu_ext": self.link.mu_ext,
            "mu_coup": self.link.mu_coup,
            "mu_int": self.link.mu_int,
            "mu_del": self.link.mu_del,
            "L_feedback_m": self.link.L_feedback,
            "L_delay_m": self.link.L_delay,
            "P_succ": self.P_succ,
            "F": self.F,
            "r": self.r,
            "T_graph_s": self.T_graph,
            "N_ph": self.N_ph,
            "reff_hz": self.R_eff,
            "secure": self.secure,
            "flags": "|".join(self.flags),
        }


def evaluate(config: RunConfig) -> EvalResult:
    """Run the full pipeline for one validated configuration."""
    gates = config.gate_times()
    link = lossmodel.build_budget(
        config.protocol, config.scheme, config.geometry, gates, config.channel, config.m
    )
    tim = timing.generation_time(config.protocol, config.scheme, config.geometry, gates)

    flags: list[str] = []
    counter = tree_analytics.ClampCounter()
    decoh = eps_decoh(tim.T_graph, config.emitter.t_coh, tim.N_ph)
    cz = eps_cz(config.beta)
    depol = config.channel.eps_depol
    if config.include_cz_error:
        depol = compose_depol(depol, cz)
        if depol > 0.75:
            depol = 0.75
            flags.append("cz-depol-saturated")
    sp = eps_sp(decoh, depol)

    if config.protocol == "tree":
        p_succ = tree_analytics.tree_success(config.geometry, link.mu_levels, config.m)
        _, e_dec = tree_analytics.decoding_error(
            config.geometry, link.mu_levels, sp, counter
        )
        fidelity = 0.0 if e_dec is None else tree_analytics.tree_fidelity(e_dec, config.m)
    else:
        metrics = rgs_analytics.link_metrics(
            config.geometry, link.mu_levels, sp, config.m, counter, link.mu_arm
        )
        p_succ = metrics.P_succ
        fidelity = metrics.F if metrics.F is not None else 0.0

    if p_succ == 0.0:
        flags.append("no-success")
    if fidelity <= SECRET_FRACTION_DOMAIN:
        r = 0.0
        flags.append("secret-fraction-domain")
    else:
        r = secret_fraction(fidelity)
    if config.m == 0:
        flags.append("m-zero-baseline")

    n = config.matter_qubit_count()
    r_eff = (
        r
        * p_succ
        * (1.0 / tim.T_graph)
        * (1.0 / (max(config.m, 1) * n))
        * (config.channel.L / config.channel.L_att)
    )
    budget = ErrorBudget(
        eps_depol=depol, eps_decoh=decoh, eps_sp=sp, eps_CZ=cz, F=fidelity, r=r
    )
    return EvalResult(
        P_succ=p_succ,
        F=fidelity,
        r=r,
        T_graph=tim.T_graph,
        N_ph=tim.N_ph,
        n=n,
        m=config.m,
        R_eff=r_eff,
        secure=r > 0.0,
        budget=budget,
        link=link,
        flags=tuple(flags),
        clamp_events=counter.events,
        config=config,
    )
