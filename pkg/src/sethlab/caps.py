"""Brute-force capacity knobs.

The default cap bounds the exponent of every exhaustive enumeration. It can
be overridden per call (``cap=``) or process-wide through ``SETHLAB_CAP``.
"""

import os

from .errors import CapacityError

DEFAULT_CAP = 24
ENV_VAR = "SETHLAB_CAP"

# subset-sum DP table cap (target value, not bit length)
DEFAULT_TABLE_CAP = 1 << 26


def default_cap() -> int:
    value = os.environ.get(ENV_VAR)
    if value is None:
        return DEFAULT_CAP
    try:
        return int(value)
    except ValueError:
        raise CapacityError(f"{ENV_VAR}={value!r} is not an integer") from None


def check_cap(what: str, size: int, cap: int | None) -> None:
    limit = default_cap() if cap is None else cap
    if size > limit:
        raise CapacityError(f"{what} = {size} exceeds brute-force cap {limit}")
