"""Input parameters, defaults, validation, and config-file round-tripping.

All quantities are SI internally (seconds, meters, rad/s).  Config files and
the CLI speak the small set of human units noted per key: the emitter
linewidth as a cycles-per-second value in GHz, distances in km.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

# Defaults shared by every run unless overridden.
DEFAULT_MU_COUP = 0.05
DEFAULT_EPS_DEPOL = 5e-5
DEFAULT_BETA = 500.0
DEFAULT_T_H_S = 100e-12
DEFAULT_T_CZ_A_S = 100e-9
DEFAULT_L_KM = 1000.0
DEFAULT_L_ATT_KM = 20.0
DEFAULT_V_M_S = 2e8  # group velocity in fiber, feedback and delay lines

PROTOCOLS = ("tree", "rgs")
SCHEMES = ("ancilla", "feedback")

# rad/s per (GHz of gamma/2pi); single constant so unit conversions invert
_ANGULAR_PER_GHZ = 2.0 * math.pi * 1e9


def _inverse_exact(internal: float, factor: float) -> float:
    """File-unit value whose re-multiplication by factor reproduces internal.

    Plain division can be off by one ulp after the round trip; the true
    preimage is always within one ulp of it, so probe the neighbours.
    """
    y = internal / factor
    if y * factor == internal:
        return y
    for cand in (math.nextafter(y, math.inf), math.nextafter(y, -math.inf)):
        if cand * factor == internal:
            return cand
    return y


class ConfigError(ValueError):
    """Invalid parameter value; the message names the offending field."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field_name = field_name


def _require(cond: bool, field_name: str, message: str) -> None:
    if not cond:
        raise ConfigError(field_name, message)


@dataclass(frozen=True)
class EmitterParams:
    """Optical linewidth (angular, rad/s) and spin coherence time (s)."""

    gamma: float
    t_coh: float

    def __post_init__(self):
        _require(self.gamma > 0, "gamma", "must be > 0")
        _require(self.t_coh > 0, "t_coh", "must be > 0 (inf allowed)")

    @staticmethod
    def from_ghz(gamma_ghz: float, t_coh: float) -> "EmitterParams":
        """Build from the linewidth given as gamma/2pi in GHz."""
        _require(gamma_ghz > 0, "gamma_ghz", "must be > 0")
        return EmitterParams(gamma=gamma_ghz * _ANGULAR_PER_GHZ, t_coh=t_coh)

    @property
    def gamma_ghz(self) -> float:
        return _inverse_exact(self.gamma, _ANGULAR_PER_GHZ)


@dataclass(frozen=True)
class ChannelParams:
    """End-to-end channel and auxiliary-line properties (SI units)."""

    L: float = DEFAULT_L_KM * 1e3
    L_att: float = DEFAULT_L_ATT_KM * 1e3
    mu_coup: float = DEFAULT_MU_COUP
    eps_depol: float = DEFAULT_EPS_DEPOL
    v_feedback: float = DEFAULT_V_M_S
    v_delay: float = DEFAULT_V_M_S

    def __post_init__(self):
        _require(self.L > 0, "L", "must be > 0")
        _require(self.L_att > 0, "L_att", "must be > 0")
        _require(0.0 <= self.mu_coup <= 1.0, "mu_coup", "must be in [0, 1]")
        _require(0.0 <= self.eps_depol <= 1.0, "eps_depol", "must be in [0, 1]")
        _require(self.v_feedback > 0, "v_feedback", "must be > 0")
        _require(self.v_delay > 0, "v_delay", "must be > 0")


@dataclass(frozen=True)
class GateTimes:
    """Resolved per-scheme gate durations (s) and wavepacket ratio."""

    t_P: float
    t_E: float
    t_CZ: float
    t_H: float
    t_M: float
    beta: float

    def __post_init__(self):
        for name in ("t_P", "t_E", "t_CZ", "t_H", "t_M"):
            _require(getattr(self, name) >= 0, name, "must be >= 0")
        _require(self.beta >= 1, "beta", "must be >= 1")


def derive_gate_times(
    emitter: EmitterParams,
    scheme: str,
    beta: float = DEFAULT_BETA,
    t_H: float = DEFAULT_T_H_S,
    t_CZ_a: float = DEFAULT_T_CZ_A_S,
) -> GateTimes:
    """Gate durations implied by the emitter linewidth for one scheme.

    Photon emission takes one inverse linewidth; a spin measurement ten.
    The ancilla scheme re-encodes with short photons and a fixed two-qubit
    gate time; the feedback scheme stretches the re-encoded photons by beta
    and its CZ is set by that wavepacket length.
    """
    _require(scheme in SCHEMES, "scheme", f"must be one of {SCHEMES}")
    t_p = 1.0 / emitter.gamma
    t_m = 10.0 * t_p
    if scheme == "ancilla":
        t_e = t_p + t_H + t_m
        t_cz = t_CZ_a
    else:
        t_e = beta * t_p + t_H + t_m
        t_cz = t_e
    return GateTimes(t_P=t_p, t_E=t_e, t_CZ=t_cz, t_H=t_H, t_M=t_m, beta=beta)


@dataclass(frozen=True)
class TreeGeometry:
    """Branching vector b_0..b_{d-1} of the encoding tree."""

    branchings: tuple[int, ...]

    def __post_init__(self):
        _require(len(self.branchings) >= 1, "branchings", "must be nonempty")
        _require(
            all(isinstance(x, int) and x >= 1 for x in self.branchings),
            "branchings",
            "every entry must be an integer >= 1",
        )

    @property
    def depth(self) -> int:
        return len(self.branchings)

    @property
    def photon_count(self) -> int:
        # nodes of levels 1..d; the root sits on the emitter and is not a photon
        total = 0
        prod = 1
        for b in self.branchings:
            prod *= b
            total += prod
        return total

    def canonical(self) -> str:
        return "-".join(str(x) for x in self.branchings)


@dataclass(frozen=True)
class RgsGeometry:
    """Core/arm pair count N and the per-core encoding tree."""

    n_arms: int
    encoding: TreeGeometry

    def __post_init__(self):
        _require(self.n_arms >= 2, "rgs_n", "must be >= 2")
        _require(self.n_arms % 2 == 0, "rgs_n", "must be even")
        _require(self.encoding.depth >= 2, "branchings", "encoding depth must be >= 2")

    @property
    def photon_count(self) -> int:
        return self.n_arms * (1 + self.encoding.photon_count)

    def canonical(self) -> str:
        return f"{self.n_arms}:{self.encoding.canonical()}"


@dataclass(frozen=True)
class RunConfig:
    """One fully-specified evaluation: protocol, scheme, hardware, geometry."""

    protocol: str
    scheme: str
    emitter: EmitterParams
    channel: ChannelParams = field(default_factory=ChannelParams)
    geometry: TreeGeometry | RgsGeometry = TreeGeometry((2, 3))
    m: int = 0
    beta: float = DEFAULT_BETA
    t_H: float = DEFAULT_T_H_S
    t_CZ_a: float = DEFAULT_T_CZ_A_S
    n_matter: int | None = None
    include_cz_error: bool = False

    def __post_init__(self):
        _require(self.protocol in PROTOCOLS, "protocol", f"must be one of {PROTOCOLS}")
        _require(self.scheme in SCHEMES, "scheme", f"must be one of {SCHEMES}")
        _require(self.m >= 0, "m", "must be >= 0")
        _require(self.beta >= 1, "beta", "must be >= 1")
        _require(self.t_H >= 0, "t_H_s", "must be >= 0")
        _require(self.t_CZ_a >= 0, "t_CZ_a_s", "must be >= 0")
        if self.n_matter is not None:
            _require(self.n_matter >= 1, "n_matter", "must be >= 1")
        if self.protocol == "tree":
            _require(
                isinstance(self.geometry, TreeGeometry),
                "protocol",
                "tree protocol requires a tree geometry",
            )
            _require(
                self.geometry.depth >= 2,
                "branchings",
                "tree protocol needs depth >= 2",
            )
        else:
            _require(
                isinstance(self.geometry, RgsGeometry),
                "protocol",
                "rgs protocol requires an rgs geometry",
            )

    def gate_times(self) -> GateTimes:
        return derive_gate_times(
            self.emitter, self.scheme, self.beta, self.t_H, self.t_CZ_a
        )

    @property
    def encoding(self) -> TreeGeometry:
        """The tree carrying the loss encoding (the geometry itself for trees)."""
        if isinstance(self.geometry, RgsGeometry):
            return self.geometry.encoding
        return self.geometry

    def matter_qubit_count(self) -> int:
        """Matter qubits per node: one emitter under feedback; the emitter
        plus one ancilla per re-encoded level under the ancilla schemes."""
        if self.n_matter is not None:
            return self.n_matter
        if self.scheme == "feedback":
            return 1
        d = self.encoding.depth
        return d if self.protocol == "tree" else d + 1


# --- config files -----------------------------------------------------------
#
# Flat "key = value" lines, '#' comments.  Keys and units are documented in
# docs/config.example.conf.  Unknown keys are rejected so typos fail loudly.

_CONFIG_KEYS = (
    "gamma_ghz",
    "tcoh_s",
    "L_km",
    "L_att_km",
    "mu_coup",
    "eps_depol",
    "v_feedback",
    "v_delay",
    "beta",
    "t_H_s",
    "t_CZ_a_s",
    "protocol",
    "scheme",
    "branchings",
    "rgs_n",
    "m",
    "n_matter",
    "include_cz_error",
)


def _parse_float(key: str, raw: str) -> float:
    if raw.lower() in ("inf", "infinity"):
        return math.inf
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(key, f"not a number: {raw!r}") from None


def _parse_int(key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(key, f"not an integer: {raw!r}") from None


def _parse_bool(key: str, raw: str) -> bool:
    low = raw.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(key, f"not a boolean: {raw!r}")


def parse_branchings(raw: str) -> tuple[int, ...]:
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    if not parts:
        raise ConfigError("branchings", "must list at least one branching")
    return tuple(_parse_int("branchings", p) for p in parts)


def config_from_mapping(values: dict[str, str]) -> RunConfig:
    """Build a validated RunConfig from raw string key/values."""
    for key in values:
        if key not in _CONFIG_KEYS:
            raise ConfigError(key, "unknown key")

    def get(key, default=None):
        return values.get(key, default)

    if "gamma_ghz" not in values:
        raise ConfigError("gamma_ghz", "required")
    if "tcoh_s" not in values:
        raise ConfigError("tcoh_s", "required")

    emitter = EmitterParams.from_ghz(
        _parse_float("gamma_ghz", values["gamma_ghz"]),
        _parse_float("tcoh_s", values["tcoh_s"]),
    )
    channel = ChannelParams(
        L=_parse_float("L_km", get("L_km", str(DEFAULT_L_KM))) * 1e3,
        L_att=_parse_float("L_att_km", get("L_att_km", str(DEFAULT_L_ATT_KM))) * 1e3,
        mu_coup=_parse_float("mu_coup", get("mu_coup", str(DEFAULT_MU_COUP))),
        eps_depol=_parse_float("eps_depol", get("eps_depol", str(DEFAULT_EPS_DEPOL))),
        v_feedback=_parse_float("v_feedback", get("v_feedback", str(DEFAULT_V_M_S))),
        v_delay=_parse_float("v_delay", get("v_delay", str(DEFAULT_V_M_S))),
    )
    protocol = get("protocol", "tree")
    scheme = get("scheme", "ancilla")
    branchings = parse_branchings(get("branchings", "2,3"))
    tree = TreeGeometry(branchings)
    geometry: TreeGeometry | RgsGeometry
    if protocol == "rgs":
        geometry = RgsGeometry(_parse_int("rgs_n", get("rgs_n", "6")), tree)
    else:
        geometry = tree
    n_matter = get("n_matter")
    return RunConfig(
        protocol=protocol,
        scheme=scheme,
        emitter=emitter,
        channel=channel,
        geometry=geometry,
        m=_parse_int("m", get("m", "0")),
        beta=_parse_float("beta", get("beta", str(DEFAULT_BETA))),
        t_H=_parse_float("t_H_s", get("t_H_s", str(DEFAULT_T_H_S))),
        t_CZ_a=_parse_float("t_CZ_a_s", get("t_CZ_a_s", str(DEFAULT_T_CZ_A_S))),
        n_matter=_parse_int("n_matter", n_matter) if n_matter is not None else None,
        include_cz_error=_parse_bool(
            "include_cz_error", get("include_cz_error", "false")
        ),
    )


def read_config_mapping(path) -> dict[str, str]:
    """Raw key/value pairs from a config file, comments stripped, unvalidated."""
    values: dict[str, str] = {}
    try:
        fh = open(path, "r", encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError("config", f"no such file: {path}") from None
    with fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise ConfigError(
                    f"line {lineno}", f"expected 'key = value', got {stripped!r}"
                )
            key, _, raw = stripped.partition("=")
            values[key.strip()] = raw.strip()
    return values


def load_config(path) -> RunConfig:
    """Parse a key = value config file into a validated RunConfig."""
    return config_from_mapping(read_config_mapping(path))


def save_config(config: RunConfig, path) -> None:
    """Write a config file that load_config parses back to an equal RunConfig."""
    lines = [
        f"gamma_ghz = {config.emitter.gamma_ghz!r}",
        f"tcoh_s = {'inf' if math.isinf(config.emitter.t_coh) else repr(config.emitter.t_coh)}",
        f"L_km = {_inverse_exact(config.channel.L, 1e3)!r}",
        f"L_att_km = {_inverse_exact(config.channel.L_att, 1e3)!r}",
        f"mu_coup = {config.channel.mu_coup!r}",
        f"eps_depol = {config.channel.eps_depol!r}",
        f"v_feedback = {config.channel.v_feedback!r}",
        f"v_delay = {config.channel.v_delay!r}",
        f"beta = {config.beta!r}",
        f"t_H_s = {config.t_H!r}",
        f"t_CZ_a_s = {config.t_CZ_a!r}",
        f"protocol = {config.protocol}",
        f"scheme = {config.scheme}",
        f"branchings = {','.join(str(x) for x in config.encoding.branchings)}",
    ]
    if isinstance(config.geometry, RgsGeometry):
        lines.append(f"rgs_n = {config.geometry.n_arms}")
    lines.append(f"m = {config.m}")
    if config.n_matter is not None:
        lines.append(f"n_matter = {config.n_matter}")
    if config.include_cz_error:
        lines.append("include_cz_error = true")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def with_overrides(config: RunConfig, **changes) -> RunConfig:
    """dataclasses.replace that re-runs validation."""
    return replace(config, **changes)
