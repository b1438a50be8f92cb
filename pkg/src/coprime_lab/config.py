"""Package-wide limits."""

import os

DEFAULT_ENUMERATION_CAP = 200_000
CAP_ENV_VAR = "COPRIME_LAB_CAP"


def enumeration_cap(explicit=None):
    """Resolve the element-enumeration cap.

    Priority: explicit argument, then the ``COPRIME_LAB_CAP`` environment
    variable, then the built-in default.
    """
    if explicit is not None:
        cap = int(explicit)
    else:
        raw = os.environ.get(CAP_ENV_VAR)
        cap = int(raw) if raw else DEFAULT_ENUMERATION_CAP
    if cap < 1:
        raise ValueError(f"enumeration cap must be positive, got {cap}")
    return cap
