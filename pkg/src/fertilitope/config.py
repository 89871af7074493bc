"""Size bounds for exhaustive oracles.

Each bound can be overridden globally through the ``FERTILITOPE_MAX_N``
environment variable, which is read at call time.
"""

import os

from .errors import ResourceError

DEFAULT_BOUNDS = {
    "preimages": 9,
    "postorder_fiber": 8,
    "quasicanonical": 8,
    "vhc_sum": 8,
    "partitions": 9,
    "rtff": 8,
}

ENV_VAR = "FERTILITOPE_MAX_N"


def bound(kind):
    override = os.environ.get(ENV_VAR)
    if override:
        return int(override)
    return DEFAULT_BOUNDS[kind]


def check_bound(kind, n, max_n=None):
    limit = bound(kind) if max_n is None else max_n
    if n > limit:
        raise ResourceError(
            f"{kind}: size {n} exceeds the oracle bound {limit} "
            f"(set {ENV_VAR} to raise it)"
        )
