"""Run manifests: what a CLI invocation was asked to do, recorded before it does it."""

import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

from src import __version__

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


def file_digest(path: Union[str, Path]) -> str:
    """sha256 of the file's bytes, hex encoded."""
    digest = hashlib.sha256()
    with Path(path).open("rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class RunManifest:
    subcommand: str
    seed: Optional[int]
    config: Dict[str, Any] = field(default_factory=dict)
    inputs: Dict[str, str] = field(default_factory=dict)
    outputs: List[str] = field(default_factory=list)
    version: str = __version__
    status: str = "started"
    exit_code: Optional[int] = None

    @classmethod
    def for_run(cls, subcommand: str, seed: Optional[int], config: Mapping[str, Any],
                inputs: Sequence[Union[str, Path]]) -> "RunManifest":
        """Digest every existing input file; missing ones are left to the subcommand to report."""
        digests = {str(p): file_digest(p) for p in inputs if p is not None and Path(p).is_file()}
        return cls(subcommand, seed, {k: _plain(v) for k, v in config.items()}, digests)

    def add_output(self, path: Union[str, Path]) -> None:
        if str(path) not in self.outputs:
            self.outputs.append(str(path))

    def write(self, out_dir: Union[str, Path]) -> Path:
        path = Path(out_dir) / MANIFEST_NAME
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True), encoding="utf-8")
        logger.debug(f"Run manifest written to {path}")
        return path

    def finish(self, out_dir: Union[str, Path], exit_code: int) -> Path:
        self.exit_code = exit_code
        self.status = "ok" if exit_code == 0 else "failed"
        return self.write(out_dir)


def _plain(value: Any) -> Any:
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if value is None or isinstance(value, (str, int, float, bool)):
        return value
    return str(value)


def read_manifest(path: Union[str, Path]) -> Dict[str, Any]:
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST_NAME
    return json.loads(path.read_text(encoding="utf-8"))
