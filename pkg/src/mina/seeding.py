"""Deterministic 64-bit seed derivation.

All randomized components derive their per-run seeds from a master seed
through ``mix64``, so independent streams (per guess, per restart, per
trial) are reproducible and do not overlap by construction of the mixer.
"""

MASK64 = (1 << 64) - 1

# Default master seed used by the CLI when none is given.
DEFAULT_MASTER_SEED = 0xC0FFEE


def _splitmix64(x: int) -> int:
    """One step of the splitmix64 finalizer (public-domain constants)."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


def mix64(*parts: int) -> int:
    """Mix integer parts into a single 64-bit seed.

    Deterministic, order-sensitive, and well-distributed even when the
    parts are small consecutive integers.
    """
    acc = 0x6A09E667F3BCC909  # sqrt(2) fractional bits, arbitrary nonzero start
    for p in parts:
        acc = _splitmix64(acc ^ (p & MASK64))
    return acc
