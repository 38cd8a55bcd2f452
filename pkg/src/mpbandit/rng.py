"""Deterministic random-stream derivation for parallel replications.

Every replication owns its own ``random.Random`` instance, seeded from the
experiment's base seed and the replication index through SHA-256. Python's
built-in ``hash`` is salted per process, so it cannot be used here.
"""

from __future__ import annotations

import hashlib
import random


def child_seed(base_seed: int, *parts: int) -> int:
    """Mix a base seed with integer parts into a stable 64-bit seed."""
    material = ":".join(str(int(p)) for p in (base_seed, *parts))
    digest = hashlib.sha256(material.encode("ascii")).digest()
    return int.from_bytes(digest[:8], "little")


def replication_rng(base_seed: int, replication: int) -> random.Random:
    """Independent stream for one replication of an experiment."""
    return random.Random(child_seed(base_seed, replication))
