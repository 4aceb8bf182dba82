"""Python front end to the slowdecay C++ core.

Configs are plain dicts in the same layout as the CLI's JSON files.
"""

import json as _json

from . import _core
from ._core import SlowdecayError

__all__ = [
    "SlowdecayError",
    "constants",
    "linear_growth",
    "regular_ef",
    "regular_radial",
    "resolve_config",
    "run_command",
    "singular_on_grid",
    "sweep_envelope",
    "verify_all",
]

PURE = {"problem": {"n": 15, "p": 3, "l": 0}}


def _dump(config):
    return _json.dumps(PURE if config is None else config)


def resolve_config(config=None):
    """Validated config with defaults filled in."""
    return _json.loads(_core.validate_config(_dump(config)))


def run_command(name, config=None, out="out"):
    """Run a CLI command in-process. Returns (exit_code, stdout, stderr)."""
    return _core.run_command(name, _dump(config), str(out))


def constants(config=None, out="out"):
    code, stdout, stderr = run_command("constants", config, out)
    if code != 0:
        raise SlowdecayError(stderr.strip())
    return _json.loads(stdout)


def verify_all(config=None):
    return _json.loads(_core.verify_all(_dump(config)))


def regular_radial(alpha, r_target, config=None):
    """(r, u, du) sample columns of the regular solution with u(0) = alpha."""
    return tuple(_core.regular_radial(_dump(config), alpha, r_target))


def regular_ef(alpha, t_min, t_max, config=None):
    """(t, v, dv) columns in Emden-Fowler variables."""
    return tuple(_core.regular_ef(_dump(config), alpha, t_min, t_max))


def singular_on_grid(config=None):
    return _core.singular_on_grid(_dump(config))


def sweep_envelope(config=None):
    """(grid, envelope, ordering_violations) of the alpha sweep."""
    return _core.sweep_envelope(_dump(config))


linear_growth = _core.linear_growth
