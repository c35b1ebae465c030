import os
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path

from dotenv import load_dotenv


DEFAULT_SEED = 0
DEFAULT_SCALE = Fraction(1)
DEFAULT_HALVING_CAP = 256
DEFAULT_GROWTH_CAP = 64


@dataclass(frozen=True)
class RunConfig:
    seed: int = DEFAULT_SEED
    scale: Fraction = DEFAULT_SCALE
    halving_cap: int = DEFAULT_HALVING_CAP
    growth_cap: int = DEFAULT_GROWTH_CAP
    output_dir: Path = Path(".")
    workers: int = 1


def _env_int(name: str, default: int, minimum: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw.strip())
    except ValueError:
        raise RuntimeError(f"Invalid {name}={raw!r}. Set {name} to an integer.") from None
    if value < minimum:
        raise RuntimeError(f"Invalid {name}={raw!r}. Set {name} to an integer >= {minimum}.")
    return value


def _env_scale(name: str, default: Fraction) -> Fraction:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = Fraction(raw.strip())
    except (ValueError, ZeroDivisionError):
        raise RuntimeError(f"Invalid {name}={raw!r}. Set {name} to a rational like '1' or '3/2'.") from None
    if "." in raw or "e" in raw.lower() or value <= 0:
        raise RuntimeError(f"Invalid {name}={raw!r}. Set {name} to a positive rational like '1' or '3/2'.")
    return value


def load_run_config(**overrides) -> RunConfig:
    """Read RunConfig from the environment (and .env); explicit overrides win.

    Overrides whose value is None are ignored, so argparse defaults of None fall
    through to the environment.
    """
    load_dotenv()
    config = RunConfig(
        seed=_env_int("INSCRIBER_SEED", DEFAULT_SEED, minimum=0),
        scale=_env_scale("INSCRIBER_SCALE", DEFAULT_SCALE),
        halving_cap=_env_int("INSCRIBER_HALVING_CAP", DEFAULT_HALVING_CAP, minimum=1),
        growth_cap=_env_int("INSCRIBER_GROWTH_CAP", DEFAULT_GROWTH_CAP, minimum=1),
        output_dir=Path(os.environ.get("INSCRIBER_OUTPUT_DIR", ".")),
        workers=_env_int("INSCRIBER_WORKERS", 1, minimum=1),
    )
    given = {key: value for key, value in overrides.items() if value is not None}
    if "output_dir" in given:
        given["output_dir"] = Path(given["output_dir"])
    config = replace(config, **given)
    for name in ("halving_cap", "growth_cap", "workers"):
        if getattr(config, name) < 1:
            raise RuntimeError(f"Invalid {name}={getattr(config, name)}. It must be >= 1.")
    if config.seed < 0 or config.scale <= 0:
        raise RuntimeError(f"Invalid seed={config.seed} or scale={config.scale}. Seed >= 0 and scale > 0 are required.")
    return config


def get_log_level() -> str:
    return os.environ.get("INSCRIBER_LOG_LEVEL", "WARNING").upper()
