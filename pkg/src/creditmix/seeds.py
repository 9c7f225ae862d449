"""Deterministic seed derivation.

Every random stage draws from its own named sub-seed derived from the one
root seed, so toggling a stage on or off never shifts the randomness of
the others.
"""

import hashlib


def derive_seed(root, name):
    """Derive a stable 64-bit sub-seed from a root seed and a stage name."""
    digest = hashlib.sha256(f"{root}\x1f{name}".encode()).digest()
    return int.from_bytes(digest[:8], "big")
