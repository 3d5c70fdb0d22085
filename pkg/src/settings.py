#!/usr/bin/env python3
"""
Engine settings
Search guards for the quaternion engine, read from the environment (or a
.env file) with built-in defaults.
"""

import os
import sys
from dataclasses import dataclass
from functools import lru_cache

# Try to load environment variables from .env file if python-dotenv is available
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass  # python-dotenv is not installed, skip .env loading

try:
    from .errors import ConfigurationError
except ImportError:
    sys.path.insert(0, os.path.dirname(__file__))
    from errors import ConfigurationError


def read_env_variable(name, default, cast=int):
    """
    Read an environment variable with error handling.

    Args:
        name: Environment variable name
        default: Value used when the variable is not set
        cast: Callable converting the raw string

    Returns:
        The cast value, or default when the variable is unset or empty

    Raises:
        ConfigurationError: the value is set but cannot be cast
    """
    value = os.getenv(name)

    if value is None or value.strip() == '':
        return default

    try:
        return cast(value.strip())
    except ValueError:
        raise ConfigurationError(f"{name}={value!r} is not a valid {cast.__name__}")


@dataclass(frozen=True)
class EngineLimits:
    """Guards for the bounded searches of the engine."""

    algebra_search_bound: int = 512
    saturation_limit: int = 64
    class_limit: int = 10 ** 6
    superorder_radius: int = 16

    @classmethod
    def from_env(cls):
        return cls(
            algebra_search_bound=read_env_variable('QUATGRAPH_ALGEBRA_SEARCH_BOUND', cls.algebra_search_bound),
            saturation_limit=read_env_variable('QUATGRAPH_SATURATION_LIMIT', cls.saturation_limit),
            class_limit=read_env_variable('QUATGRAPH_CLASS_LIMIT', cls.class_limit),
            superorder_radius=read_env_variable('QUATGRAPH_SUPERORDER_RADIUS', cls.superorder_radius),
        )


@lru_cache(maxsize=1)
def get_limits():
    """Return the process-wide limits, read once from the environment."""
    return EngineLimits.from_env()
