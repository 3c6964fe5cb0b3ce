"""Run manifests: enough recorded context to replay a command."""

import json
import os
import tempfile
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from hawkes_mml import __version__
from hawkes_mml.utils.errors import ValidationError

MANIFEST_FILENAME = "manifest.json"


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class RunManifest:
    """
    Record of one CLI run.

    argv holds the full command line after the program name, so replaying a
    run is re-parsing argv.
    """

    command: str
    argv: List[str]
    config: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None
    version: str = __version__
    started_at: str = field(default_factory=_now)
    finished_at: Optional[str] = None
    outputs: Dict[str, str] = field(default_factory=dict)

    def add_output(self, kind: str, path: Union[str, Path]) -> None:
        self.outputs[kind] = str(path)

    def finish(self) -> None:
        self.finished_at = _now()

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunManifest":
        try:
            return cls(
                command=data["command"],
                argv=list(data["argv"]),
                config=data.get("config", {}),
                seed=data.get("seed"),
                version=data.get("version", __version__),
                started_at=data.get("started_at", ""),
                finished_at=data.get("finished_at"),
                outputs=data.get("outputs", {}),
            )
        except KeyError as e:
            raise ValidationError(f"Manifest is missing '{e.args[0]}'") from None

    def write(self, directory: Union[str, Path]) -> Path:
        """Write manifest.json into directory atomically (temp file + rename)."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        target = directory / MANIFEST_FILENAME
        fd, temp_path = tempfile.mkstemp(dir=directory, prefix=".manifest-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as f:
                json.dump(self.to_dict(), f, indent=2, default=str)
                f.write("\n")
            os.replace(temp_path, target)
        except BaseException:
            if os.path.exists(temp_path):
                os.unlink(temp_path)
            raise
        return target

    @classmethod
    def read(cls, path: Union[str, Path]) -> "RunManifest":
        path = Path(path)
        if path.is_dir():
            path = path / MANIFEST_FILENAME
        try:
            with open(path) as f:
                return cls.from_dict(json.load(f))
        except json.JSONDecodeError as e:
            raise ValidationError(f"Invalid manifest {path}: {e}") from None
