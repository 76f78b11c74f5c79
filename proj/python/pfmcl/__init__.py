"""Phase-field moving contact line solver.

Configurations are dicts of the same keys the ``pfmcl`` command line accepts
(see ``config_keys()``), applied on top of a preset::

    import pfmcl
    sim = pfmcl.Simulation({"preset": "relaxation", "nx": 65, "ny": 16})
    sim.step(10)
    sim.phi  # (ny, nx) array, rows ascending in y
"""

from ._pfmcl import (
    ConfigError,
    FormatError,
    RunError,
    Simulation,
    config_keys,
    csv_header,
    preset_names,
    preset_values,
    resolve_config,
    run,
)

__all__ = [
    "ConfigError",
    "FormatError",
    "RunError",
    "Simulation",
    "config_keys",
    "csv_header",
    "preset_names",
    "preset_values",
    "resolve_config",
    "run",
]
