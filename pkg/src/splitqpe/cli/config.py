"""
Per-command run configuration: a JSON file plus flat `--key value` overrides,
validated against the dataclass of the command.
"""
import json
import logging
import os
import typing
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, List, Optional, Sequence, Type, TypeVar

from ..const import EPS_CHEM, OUTPUT_DIR_ENV, PPP_ALPHA, PPP_BETA1, PPP_BETA2, TROTTER_ORDER
from ..errors import ConfigError
from ..models import EthyleneRun, PPPParams

logger = logging.getLogger(__name__)

TRUE_WORDS = ("1", "true", "yes", "on")
FALSE_WORDS = ("0", "false", "no", "off")

C = TypeVar("C", bound="RunConfig")


@dataclass
class RunConfig:
    out_dir: Optional[str] = None

    def output_dir(self) -> str:
        path = self.out_dir or os.environ.get(OUTPUT_DIR_ENV) or "."
        os.makedirs(path, exist_ok=True)
        return path

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class ModelConfig(RunConfig):
    alpha: float = PPP_ALPHA
    beta1: float = PPP_BETA1
    beta2: float = PPP_BETA2

    def params(self) -> PPPParams:
        return PPPParams(self.alpha, self.beta1, self.beta2)


@dataclass
class BuildConfig(ModelConfig):
    """
    - method: qpe, se or cu
    - policy: per-bit c/g string, all gadgets when omitted
    - theta: input ansatz angle, mean-field when omitted
    - t_eps: T gates per rotation in the metric summary
    """
    method: str = "se"
    m: int = 5
    tau: float = 10.0
    policy: Optional[str] = None
    cat: bool = False
    measure_reset: bool = False
    theta: Optional[float] = None
    bias_correction: bool = True
    t_eps: float = 1.0

    def run(self) -> EthyleneRun:
        return EthyleneRun(self.method, self.m, self.tau, self.policy, self.cat, self.measure_reset,
                           self.theta, self.bias_correction, self.params())


@dataclass
class SimulateConfig(BuildConfig):
    """
    shots = 0 gives the exact phase marginal and allows no noise; shots >= 1 are sampled
    """
    shots: int = 0
    seed: int = 0
    p2: float = 0.0
    pm: float = 0.0

    def __post_init__(self):
        if self.shots < 0:
            raise ConfigError(f"shots must be >= 0, got {self.shots}")
        if (self.p2 > 0 or self.pm > 0) and self.shots < 1:
            raise ConfigError(f"noise p2={self.p2} pm={self.pm} needs shots >= 1, got {self.shots}")

    @property
    def sampled(self) -> bool:
        return self.shots > 0


@dataclass
class ScanCommandConfig(RunConfig):
    """
    With dfspec, scans that file; otherwise sweeps synthetic coefficients over n_values
    """
    dfspec: Optional[str] = None
    n_values: str = "4,6,8,10,12,16,20,24,30"
    l_factor: int = 2
    seed: int = 0
    spin_block: bool = False
    eps_chem: float = EPS_CHEM
    trotter_order: int = TROTTER_ORDER
    swap: str = "cat"

    def n_list(self) -> List[int]:
        try:
            values = [int(part) for part in self.n_values.split(",") if part.strip()]
        except ValueError:
            values = []
        if not values:
            raise ConfigError(f"[ScanCommandConfig] n_values must be comma-separated integers, got {self.n_values!r}")
        return values


@dataclass
class VerifyConfig(ModelConfig):
    quick: bool = False
    only: Optional[str] = None

    def only_ids(self) -> Optional[List[str]]:
        if not self.only:
            return None
        return [part.strip() for part in self.only.split(",") if part.strip()]


def _field_type(tp) -> type:
    # Optional[X] -> X
    args = [a for a in typing.get_args(tp) if a is not type(None)]
    return args[0] if args else tp


def coerce(name: str, tp, value: Any) -> Any:
    if value is None:
        return None
    target = _field_type(tp)
    if isinstance(value, str) and value.lower() == "none" and target is not str:
        return None
    try:
        if target is bool:
            if isinstance(value, bool):
                return value
            text = str(value).lower()
            if text in TRUE_WORDS:
                return True
            if text in FALSE_WORDS:
                return False
            raise ValueError(value)
        if target is int:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(value)
            return int(value)
        if target is float:
            return float(value)
        return str(value)
    except (TypeError, ValueError):
        raise ConfigError(f"config key {name!r} expects {target.__name__}, got {value!r}")


def parse_overrides(tokens: Sequence[str]) -> Dict[str, str]:
    """
    ["--m", "6", "--tau", "8"] -> {"m": "6", "tau": "8"}; a flag without a value means true
    """
    out = {}
    k = 0
    while k < len(tokens):
        token = tokens[k]
        if not token.startswith("--"):
            raise ConfigError(f"unexpected argument {token!r}, overrides are --key value pairs")
        key = token[2:]
        if "=" in key:
            key, value = key.split("=", 1)
            k += 1
        elif k + 1 < len(tokens) and not tokens[k + 1].startswith("--"):
            value = tokens[k + 1]
            k += 2
        else:
            value = "true"
            k += 1
        out[key.replace("-", "_")] = value
    return out


def load_config(cls: Type[C], path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> C:
    data: Dict[str, Any] = {}
    if path:
        try:
            with open(path, "r") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {path}: {e}")
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
    data.update(overrides or {})
    hints = typing.get_type_hints(cls)
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config keys for {cls.__name__}: {', '.join(unknown)}")
    values = {name: coerce(name, hints[name], value) for name, value in data.items()}
    logger.debug("[load_config] %s %s", cls.__name__, values)
    return cls(**values)
