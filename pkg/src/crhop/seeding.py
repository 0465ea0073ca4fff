"""Deterministic hierarchical random streams.

Every source of randomness in a run is drawn from a labeled substream of the
run's root seed. Labels are stable strings ("topology", "pr/3", ...), so two
runs that share a root seed see identical draws for identically labeled
streams regardless of which protocol or handshake is being simulated. This is
what makes paired comparisons share their topology and primary-radio traces.

Run seeds themselves are derived from (base seed, environment key, run index)
with SHA-256, where the environment key deliberately excludes the protocol and
handshake axes.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _label_words(label: str) -> tuple[int, ...]:
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return tuple(int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4))


def root_sequence(seed: int | np.random.SeedSequence) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(int(seed))


def substream(parent: np.random.SeedSequence, label: str) -> np.random.SeedSequence:
    """Child seed sequence identified by a stable label."""
    return np.random.SeedSequence(
        entropy=parent.entropy, spawn_key=tuple(parent.spawn_key) + _label_words(label)
    )


def labeled_rng(parent: np.random.SeedSequence, label: str) -> np.random.Generator:
    return np.random.default_rng(substream(parent, label))


def derive_run_seed(base_seed: int, environment_key: str, run_index: int) -> int:
    """64-bit run seed, a pure function of its arguments.

    Protocol and handshake must not appear in `environment_key`: cells that
    differ only in those axes are meant to share run seeds (paired seeds).
    """
    material = f"{base_seed}|{environment_key}|{run_index}".encode("utf-8")
    return int.from_bytes(hashlib.sha256(material).digest()[:8], "little")
