"""Assembly-mode counting for planar Laman linkages.

Thin wrappers over the C++ core; every structured result is a plain dict.
"""

import json

from . import _amodes
from ._amodes import InputError, __version__, is_laman

__all__ = ["InputError", "__version__", "bounds", "count", "is_laman", "mixed_volume", "optimize", "run"]


def run(*args):
    """Runs an amodes command line, e.g. run("bounds", "--n", "7").

    Returns (exit_code, stdout, stderr).
    """
    return _amodes.run_cli([str(a) for a in args])


def _run_json(*args):
    code, out, err = run("--json", *args)
    if code != 0:
        raise InputError(err.strip() or f"amodes exited with {code}")
    return json.loads(out)


def bounds(n):
    return _run_json("bounds", "--n", n)


def mixed_volume(topology="v17"):
    return _run_json("mixed-volume", "--topology", topology)["mixed_volume"]


def count(lengths, topology="v17", seed=1):
    """N for a length assignment.

    `lengths` is anything the length-file format accepts: {"edges": {...}},
    {"squared": {...}}, or a parameter vector (list, squared distances).
    """
    return json.loads(_amodes.count_json(json.dumps(lengths), topology, seed))


def optimize(method="ce", budget=600, seed=1, solver_seed=1, units="squared"):
    return json.loads(_amodes.optimize_json(method, budget, seed, solver_seed, units))
