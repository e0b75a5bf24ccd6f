import json
from pathlib import Path
from typing import Any

import numpy as np


def derive_seed_sequence(seed: int, *key: int) -> np.random.SeedSequence:
    """
    Child seed sequence addressed by an integer key path.

    The same (seed, key) always yields the same stream regardless of which other
    streams were created before, so batches and sweep cells can run in any order.
    """
    return np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(k) for k in key))


def derive_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed_sequence(seed, *key))


def derive_int_seed(seed: int, *key: int) -> int:
    """Plain 32-bit integer seed for libraries that do not take a Generator (networkx)."""
    return int(derive_seed_sequence(seed, *key).generate_state(1)[0])


def read_json(path) -> Any:
    """
    Reads a JSON document from disk.

    Parameters:
    - path (str | Path): location of the file.

    Returns:
    - The decoded document.
    """
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as e:
        raise OSError(f"Could not read {path}: {e}") from e


def write_json(path, payload: Any) -> Path:
    """
    Writes `payload` as indented JSON, creating parent directories.

    Parameters:
    - path (str | Path): destination file.
    - payload: any JSON-serializable object.

    Returns:
    - Path: the written file.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8") as handle:
            json.dump(payload, handle, indent=2, sort_keys=True)
            handle.write("\n")
    except OSError as e:
        raise OSError(f"Could not write {path}: {e}") from e
    return path
