"""Deterministic derivation of independent RNG streams.

Replicate i of a run with master seed s always receives the stream derived
from (s, i) alone, so results are identical under any execution order or
worker count.  random.Random supplies uniform reals in [0, 1) and unbiased
(rejection-sampled) integers in [0, x).
"""

from __future__ import annotations

import hashlib
import random
import struct

_MASK64 = (1 << 64) - 1
_sha256 = hashlib.sha256
_pack = struct.Struct("<QQ").pack


def derive_seed(master: int, stream: int, label: str = "replicate") -> int:
    payload = _pack(master & _MASK64, stream & _MASK64) + label.encode()
    return int.from_bytes(_sha256(payload).digest()[:8], "little")


def spawn_rng(master: int, stream: int, label: str = "replicate") -> random.Random:
    return random.Random(derive_seed(master, stream, label))
