"""Stable seed derivation.

All stochastic choices in the engine flow from seeds produced here, so a
rendered song is a pure function of (song file, curves, master seed). The
derivation is SHA-256 over the colon-joined decimal/string parts, taking the
first 8 bytes big-endian; it is platform-independent and documented as part
of the song file schema.
"""

from __future__ import annotations

import hashlib
from random import Random
from typing import Union

SEED_MASK = (1 << 64) - 1


def stable_seed(*parts: Union[int, str]) -> int:
    """64-bit seed derived deterministically from the given parts."""
    text = ":".join(
        str(p & SEED_MASK) if isinstance(p, int) else str(p) for p in parts
    )
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def rng_for(*parts: Union[int, str]) -> Random:
    """Fresh deterministic RNG keyed by the given parts."""
    return Random(stable_seed(*parts))
