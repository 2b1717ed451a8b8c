"""Run configuration: primes, order, seed, timeouts, output mode, tier.

The environment variable PERMVAR_CONFIG may point at a JSON file whose keys
override the defaults below; CLI flags override both.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace

DEFAULT_PRIME = 2147483647  # 2^31 - 1
SECOND_PRIME = 1073741789
ENV_CONFIG = "PERMVAR_CONFIG"
DEFAULT_SEED = 176856257


@dataclass(frozen=True)
class CliConfig:
    prime: int = DEFAULT_PRIME
    prime2: int = SECOND_PRIME
    order: str = "degrevlex"
    seed: int = DEFAULT_SEED
    timeout_s: float = 600.0
    output: str = "text"  # text | json
    tier: str = "default"  # default | extended

    @property
    def primes(self) -> tuple:
        return (self.prime, self.prime2)


def load_config(**overrides) -> CliConfig:
    cfg = CliConfig()
    path = os.environ.get(ENV_CONFIG)
    if path:
        with open(path) as fh:
            data = json.load(fh)
        cfg = replace(cfg, **{k: v for k, v in data.items() if hasattr(cfg, k)})
    clean = {k: v for k, v in overrides.items() if v is not None and hasattr(cfg, k)}
    return replace(cfg, **clean)
