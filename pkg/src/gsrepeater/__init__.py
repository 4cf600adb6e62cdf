"""Secret-key-rate models for graph-state quantum repeaters.

Evaluates and optimizes the effective secret key rate of one-way repeater
chains built from tree-encoded photonic qubits or repeater graph states,
generated by a single quantum emitter with either ancilla-assisted or
fiber-feedback entangling flows.
"""

from gsrepeater._kernels import IMPL_NAME as kernel_implementation
from gsrepeater.keyrate import ErrorBudget, EvalResult, evaluate, secret_fraction
from gsrepeater.params import (
    ChannelParams,
    ConfigError,
    EmitterParams,
    GateTimes,
    RgsGeometry,
    RunConfig,
    TreeGeometry,
    config_from_mapping,
    load_config,
    save_config,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelParams",
    "ConfigError",
    "EmitterParams",
    "ErrorBudget",
    "EvalResult",
    "GateTimes",
    "RgsGeometry",
    "RunConfig",
    "TreeGeometry",
    "__version__",
    "config_from_mapping",
    "evaluate",
    "kernel_implementation",
    "load_config",
    "save_config",
    "secret_fraction",
]
