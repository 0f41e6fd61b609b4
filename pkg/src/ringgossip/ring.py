"""m-bit circular identifier space: distances, intervals, name hashing.

All ring arithmetic is modulo 2^m. Node ids are plain ints in [0, 2^m).
"""

from __future__ import annotations

from dataclasses import dataclass

NodeId = int

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class RingConfig:
    """Identifier-space parameters shared by every node of one network.

    m is the ring bit width (2^m positions); seed feeds every RNG stream
    of a run so that identical configs replay identically.
    """

    m: int = 16
    seed: int = 0

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"ring bit width must be >= 1, got {self.m}")

    @property
    def size(self) -> int:
        return 1 << self.m

    @property
    def mask(self) -> int:
        return (1 << self.m) - 1

    def validate_id(self, value: NodeId) -> None:
        if not 0 <= value < self.size:
            raise ValueError(f"id {value} outside ring [0, 2^{self.m})")


def clockwise_distance(a: NodeId, b: NodeId, cfg: RingConfig) -> int:
    """Steps from a to b moving clockwise (increasing ids, wrapping)."""
    return (b - a) & cfg.mask


def in_interval(x: NodeId, open_lo: NodeId, closed_hi: NodeId, cfg: RingConfig) -> bool:
    """True iff x lies in the clockwise interval (open_lo, closed_hi].

    Wraps around zero. When open_lo == closed_hi the interval is the
    whole ring (a full clockwise lap).
    """
    if open_lo == closed_hi:
        return True
    d_x = clockwise_distance(open_lo, x, cfg)
    d_hi = clockwise_distance(open_lo, closed_hi, cfg)
    return 0 < d_x <= d_hi


def fnv1a_64(data: bytes) -> int:
    """64-bit FNV-1a: stable across runs and platforms, non-cryptographic."""
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _U64
    return h


def hash_name(name: str, cfg: RingConfig) -> NodeId:
    """Map a name deterministically onto the ring.

    The 64-bit hash is xor-folded down to m bits so upper bits still
    contribute when m is small.
    """
    if not name:
        raise ValueError("name must be non-empty")
    h = fnv1a_64(name.encode("utf-8"))
    folded = h
    width = 64
    while width > cfg.m:
        width = max(cfg.m, width // 2)
        folded = (folded ^ (folded >> width)) & ((1 << width) - 1)
    return folded & cfg.mask
