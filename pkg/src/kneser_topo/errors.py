"""Exception types and resource caps shared across the package."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace


class KneserTopoError(Exception):
    """Base class for errors raised by this package."""


class ParameterError(KneserTopoError, ValueError):
    """Invalid or inconsistent parameters (CLI exit code 3)."""


class ResourceError(KneserTopoError):
    """A configured resource cap was exceeded (CLI exit code 2)."""


CAPS_ENV_VAR = "KNESER_TOPO_CAPS"


@dataclass(frozen=True)
class Caps:
    max_elements: int = 20_000
    max_simplices: int = 5_000_000
    vertex_budget: int = 64

    def __post_init__(self):
        for name in ("max_elements", "max_simplices", "vertex_budget"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"cap {name} must be positive")

    def updated(self, **overrides) -> "Caps":
        clean = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **clean)


def caps_from_env(environ=None) -> Caps:
    """Default caps, overridden by ``KNESER_TOPO_CAPS``.

    The variable holds either a JSON object or ``key=value`` pairs separated
    by commas, e.g. ``max_elements=5000,vertex_budget=80``.
    """
    environ = os.environ if environ is None else environ
    raw = environ.get(CAPS_ENV_VAR, "").strip()
    if not raw:
        return Caps()
    if raw.startswith("{"):
        try:
            values = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"{CAPS_ENV_VAR}: {exc}") from None
    else:
        values = {}
        for part in raw.split(","):
            key, sep, val = part.partition("=")
            if not sep:
                raise ParameterError(f"{CAPS_ENV_VAR}: expected key=value, got {part!r}")
            values[key.strip()] = val.strip()
    known = {"max_elements", "max_simplices", "vertex_budget"}
    unknown = set(values) - known
    if unknown:
        raise ParameterError(f"{CAPS_ENV_VAR}: unknown keys {sorted(unknown)}")
    try:
        return Caps(**{k: int(v) for k, v in values.items()})
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ParameterError):
            raise
        raise ParameterError(f"{CAPS_ENV_VAR}: {exc}") from None


DEFAULT_CAPS = Caps()
