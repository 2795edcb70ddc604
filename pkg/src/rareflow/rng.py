"""Counter-based random streams keyed by (seed, *ids).

Every replication (and anything else that needs an independent stream) gets
its own Philox generator whose key is derived from the master seed and an
integer path of identifiers.  Streams therefore do not depend on the order in
which they are created or on how work is spread over processes.
"""
from __future__ import annotations

import numpy as np

METHOD_IDS = {"mc": 0, "ips": 1, "hfmc": 2}


def stream(seed: int, *ids: int) -> np.random.Generator:
    """Independent generator for the key ``(seed, *ids)``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(i) for i in ids))
    return np.random.Generator(np.random.Philox(ss))


def replication_stream(seed: int, method: str, replication: int) -> np.random.Generator:
    return stream(seed, METHOD_IDS[method], replication)
