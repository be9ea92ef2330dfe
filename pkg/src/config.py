"""Configuration management module"""
import json
import logging
import math
import os
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Union

from .exceptions import ConfigError

logger = logging.getLogger(__name__)

MAX_ORDER = 6
MAX_PASSES = 6
DEFAULT_BUDGET = 100_000_000
SOLVERS = ("sgn", "snmf")
NMI_AVERAGES = ("geometric", "arithmetic")


def parse_epsilon(value: Union[str, float, int, None]) -> float:
    """Read a threshold value; 'disabled'/'inf'/None mean no reconstruction"""
    if value is None:
        return math.inf
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("disabled", "inf", "infinity", "none"):
            return math.inf
        try:
            return float(text)
        except ValueError:
            raise ConfigError(f"Invalid epsilon value: {value}")
    return float(value)


def format_epsilon(value: float) -> Union[float, str]:
    """Report form of a threshold: the number, or 'disabled'"""
    return "disabled" if math.isinf(value) else value


@dataclass
class SgnConfig:
    """Hyper-parameters of one training run"""
    K: int
    theta: float = 0.125
    lam: float = 1.0
    beta: float = 0.5
    tol: float = 1e-1
    max_iters: int = 200
    seed: int = 0

    def validate(self) -> None:
        """Validate solver settings"""
        for name in ("theta", "lam", "beta", "tol"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be a finite number")
        if self.K < 1:
            raise ConfigError("Community count K must be at least 1")
        if self.theta <= 0:
            raise ConfigError("theta must be positive")
        if self.lam < 0:
            raise ConfigError("lambda must be nonnegative")
        if not 0 < self.beta <= 1:
            raise ConfigError("beta must lie in (0, 1]")
        if self.tol <= 0:
            raise ConfigError("Tolerance must be positive")
        if self.max_iters < 1:
            raise ConfigError("max_iters must be at least 1")

    def with_seed(self, seed: int) -> "SgnConfig":
        """Copy with another initialization seed"""
        values = asdict(self)
        values["seed"] = seed
        return SgnConfig(**values)


@dataclass
class ReconstructionSettings:
    """HOP reconstruction settings"""
    r: int = 2
    d: int = 3
    epsilon: float = 5.0
    budget: int = DEFAULT_BUDGET

    @property
    def enabled(self) -> bool:
        """False when the threshold is disabled"""
        return not math.isinf(self.epsilon)

    def validate(self) -> None:
        """Validate reconstruction settings"""
        if not 1 <= self.r <= MAX_ORDER:
            raise ConfigError(f"r must lie in [1, {MAX_ORDER}]")
        if not 1 <= self.d <= MAX_PASSES:
            raise ConfigError(f"d must lie in [1, {MAX_PASSES}]")
        if math.isnan(self.epsilon) or self.epsilon <= 1:
            raise ConfigError("epsilon must be greater than 1")
        if self.budget < 1:
            raise ConfigError("Enumeration budget must be positive")


@dataclass
class ExperimentSettings:
    """Trial protocol settings"""
    trials: int = 10
    seed: int = 0
    solver: str = "sgn"
    workers: int = 1
    nmi_average: str = "geometric"

    def validate(self) -> None:
        """Validate experiment settings"""
        if self.trials < 1:
            raise ConfigError("At least one trial is required")
        if self.solver not in SOLVERS:
            raise ConfigError(f"Invalid solver: {self.solver}")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if self.nmi_average not in NMI_AVERAGES:
            raise ConfigError(f"Invalid NMI normalization: {self.nmi_average}")


DEFAULT_CONFIG: Dict[str, Any] = {
    "model": {
        "theta": 0.125,
        "lambda": 1.0,
        "beta": 0.5,
        "tol": 0.1,
        "max_iters": 200,
    },
    "reconstruction": {
        "r": 2,
        "d": 3,
        "epsilon": 5,
    },
    "experiment": {
        "trials": 10,
        "seed": 0,
        "solver": "sgn",
        "workers": 1,
        "nmi_average": "geometric",
    },
    "enumeration": {
        "budget": DEFAULT_BUDGET,
    },
}


class Config:
    """Configuration manager"""

    def __init__(self, config_path: Optional[str] = None):
        """Initialize configuration"""
        self.config_path = config_path or os.getenv("HSGN_CONFIG", "config.json")
        self.config: Dict[str, Any] = self._load_config()
        self.validate()

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from file, section by section over the defaults"""
        config = json.loads(json.dumps(DEFAULT_CONFIG))
        if not os.path.exists(self.config_path):
            logger.info(f"No config file at {self.config_path}, using built-in defaults")
            return config
        try:
            with open(self.config_path, "r", encoding="utf-8") as f:
                loaded = json.load(f)
        except json.JSONDecodeError:
            raise ConfigError("Invalid JSON in config file")
        if not isinstance(loaded, dict):
            raise ConfigError("Config file must hold a JSON object")
        for section, values in loaded.items():
            if section not in config:
                raise ConfigError(f"Unknown config section: {section}")
            if not isinstance(values, dict):
                raise ConfigError(f"Config section '{section}' must be an object")
            config[section].update(values)
        return config

    def model_settings(self, K: int) -> SgnConfig:
        """Solver settings for K communities"""
        model = self.config["model"]
        try:
            return SgnConfig(
                K=int(K),
                theta=float(model["theta"]),
                lam=float(model["lambda"]),
                beta=float(model["beta"]),
                tol=float(model["tol"]),
                max_iters=int(model["max_iters"]),
                seed=int(self.config["experiment"]["seed"]),
            )
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid model settings: {e}")

    def reconstruction_settings(self) -> ReconstructionSettings:
        """Reconstruction settings with the enumeration budget"""
        rec = self.config["reconstruction"]
        try:
            return ReconstructionSettings(
                r=int(rec["r"]),
                d=int(rec["d"]),
                epsilon=parse_epsilon(rec["epsilon"]),
                budget=int(self.config["enumeration"]["budget"]),
            )
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid reconstruction settings: {e}")

    def experiment_settings(self) -> ExperimentSettings:
        """Trial protocol settings"""
        exp = self.config["experiment"]
        try:
            return ExperimentSettings(
                trials=int(exp["trials"]),
                seed=int(exp["seed"]),
                solver=str(exp["solver"]),
                workers=int(exp["workers"]),
                nmi_average=str(exp["nmi_average"]),
            )
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Invalid experiment settings: {e}")

    def validate(self) -> None:
        """Validate configuration"""
        # K is supplied per run; any valid placeholder checks the rest of the model section
        self.model_settings(K=1).validate()
        self.reconstruction_settings().validate()
        self.experiment_settings().validate()
