"""Hashing utilities for dataset digests and keyed seed words."""

import hashlib


def hash_text(text: str) -> str:
    """Hex SHA-256 of ``text`` encoded as UTF-8."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def key_word(key: str) -> int:
    """Map a string key to a stable 32-bit word.

    Python's built-in ``hash`` is salted per process, so seed derivation
    goes through SHA-256 instead.
    """
    return int(hashlib.sha256(key.encode("utf-8")).hexdigest()[:8], 16)
