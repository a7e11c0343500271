"""JSON parameter checkpoints.

Layout::

    {"format_version": 1,
     "parameters": [{"name": ..., "shape": [...], "values": [...]}, ...],
     "manifest": {...}}

Values are row-major float64; JSON floats use the shortest repr, so a save/load
cycle is bit-exact.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from src.autodiff.parameters import ParameterSet
from src.errors import FormatError

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


def save_checkpoint(path: Union[str, Path], params: ParameterSet,
                    manifest: Optional[Dict[str, Any]] = None) -> Path:
    path = Path(path)
    payload = {
        "format_version": FORMAT_VERSION,
        "parameters": [
            {"name": p.name, "shape": list(p.values.shape), "values": p.values.ravel().tolist()}
            for p in params
        ],
        "manifest": manifest or {},
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload), encoding="utf-8")
    logger.info(f"Checkpoint with {len(params)} parameters written to {path}")
    return path


def load_checkpoint(path: Union[str, Path]) -> Tuple[Dict[str, np.ndarray], Dict[str, Any]]:
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise FormatError(f"checkpoint is not valid JSON: {e}", path=str(path)) from e
    version = payload.get("format_version")
    if version is None:
        raise FormatError("checkpoint lacks format_version", path=str(path))
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported checkpoint format_version {version}", path=str(path))
    state: Dict[str, np.ndarray] = {}
    for entry in payload.get("parameters", []):
        shape = tuple(entry["shape"])
        values = np.asarray(entry["values"], dtype=np.float64)
        if values.size != int(np.prod(shape)):
            raise FormatError(f"parameter '{entry['name']}' has {values.size} values for shape {shape}",
                              path=str(path))
        state[entry["name"]] = values.reshape(shape)
    return state, payload.get("manifest", {})
