"""Experiment configuration: a flat ``key = value`` file plus CLI overrides.

Values are Python literals (``500``, ``0.1``, ``[0.5, 0.1]``, ``0.5+0.5j``);
anything that does not parse as a literal is kept as a bare string.
``#`` starts a comment.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from pathlib import Path

from ..errors import ConfigInvalid

EXPERIMENTS = ("figure1", "bulk-convergence", "bauer-fike", "concentration", "semicircle", "oracle")

DEFAULTS = {
    "figure1": dict(n=[500], p=[0.5, 0.1, 0.08, 0.05], trials=1),
    "bulk-convergence": dict(n=[200, 400, 800], p=[0.1], trials=20),
    "bauer-fike": dict(n=[500], p=[0.5, 0.1], trials=100),
    "concentration": dict(n=[2000], p=[0.05], trials=100),
    "semicircle": dict(n=[2000], p=[0.1], trials=20),
    "oracle": dict(n=list(range(6, 31)), p=[0.5], trials=2),
}

KEYS = {"experiment", "n", "p", "trials", "seed", "z_list", "out", "workers", "oracle_tol", "store_eigenvalues"}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    n: tuple[int, ...]
    p: tuple[float, ...]
    trials: int
    seed: int = 0
    z_list: tuple[complex, ...] = ()
    out: Path = Path("results")
    workers: int = 1
    oracle_tol: float = 1e-7
    store_eigenvalues: bool = True

    def as_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "n": list(self.n),
            "p": list(self.p),
            "trials": self.trials,
            "seed": self.seed,
            "z_list": [[z.real, z.imag] for z in self.z_list],
            "workers": self.workers,
            "oracle_tol": self.oracle_tol,
        }


def parse_config_text(text: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigInvalid(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in KEYS:
            raise ConfigInvalid(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = ast.literal_eval(val)
        except (ValueError, SyntaxError):
            values[key] = val.strip("'\"")
    return values


def load_config(path) -> dict:
    try:
        return parse_config_text(Path(path).read_text())
    except OSError as exc:
        raise ConfigInvalid(f"cannot read config {path}: {exc}") from exc


def _as_tuple(v, kind):
    items = v if isinstance(v, (list, tuple)) else [v]
    try:
        return tuple(kind(x) for x in items)
    except (TypeError, ValueError) as exc:
        raise ConfigInvalid(f"cannot interpret {v!r} as {kind.__name__} list") from exc


def make_config(values: dict) -> ExperimentConfig:
    """Validate raw values (file merged with overrides) into a config."""
    name = values.get("experiment")
    if name not in EXPERIMENTS:
        raise ConfigInvalid(f"experiment must be one of {EXPERIMENTS}, got {name!r}")
    merged = {**DEFAULTS[name], **{k: v for k, v in values.items() if v is not None}}
    z_list = tuple(complex(z) if not isinstance(z, (list, tuple)) else complex(*z) for z in merged.get("z_list", ()) or ())
    try:
        cfg = ExperimentConfig(
            experiment=name,
            n=_as_tuple(merged["n"], int),
            p=_as_tuple(merged["p"], float),
            trials=int(merged["trials"]),
            seed=int(merged.get("seed", 0)),
            z_list=z_list,
            out=Path(merged.get("out", "results")),
            workers=int(merged.get("workers", 1)),
            oracle_tol=float(merged.get("oracle_tol", 1e-7)),
            store_eigenvalues=bool(merged.get("store_eigenvalues", True)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigInvalid(str(exc)) from exc
    validate(cfg)
    return cfg


def validate(cfg: ExperimentConfig) -> None:
    if cfg.trials < 1:
        raise ConfigInvalid(f"trials must be >= 1, got {cfg.trials}")
    if cfg.workers < 1:
        raise ConfigInvalid(f"workers must be >= 1, got {cfg.workers}")
    if not cfg.n or not cfg.p:
        raise ConfigInvalid("n and p must be non-empty")
    for n in cfg.n:
        if n < (3 if cfg.experiment == "oracle" else 2):
            raise ConfigInvalid(f"n = {n} too small for {cfg.experiment}")
    for p in cfg.p:
        if cfg.experiment == "oracle":
            if not 0.0 < p <= 1.0:
                raise ConfigInvalid(f"p = {p} outside (0, 1]")
            continue
        if not 0.0 < p < 1.0:
            raise ConfigInvalid(f"p = {p} outside (0, 1)")
        for n in cfg.n:
            if not (n - 1) * p > 1.0:
                raise ConfigInvalid(f"(n-1)p = {(n - 1) * p} <= 1 at n={n}, p={p}: alpha would not be positive")
    for z in cfg.z_list:
        if z.imag == 0 or abs(abs(z) - 1.0) <= 1e-12:
            raise ConfigInvalid(f"z = {z} must have Im z != 0 and |z| != 1")

