from hashlib import sha256
from logging import getLogger
from pathlib import Path

from pydantic import ValidationError

from ..errors import GridFileError
from ..models import FileEntry, Manifest

logger = getLogger(__name__)

MANIFEST_NAME = "manifest.json"


def file_entry(path: Path, kind: str) -> FileEntry:
    return FileEntry(name=path.name, kind=kind, sha256=sha256(path.read_bytes()).hexdigest())


def write_manifest(out_dir: str | Path, manifest: Manifest) -> Path:
    path = Path(out_dir) / MANIFEST_NAME
    path.write_text(manifest.model_dump_json(indent=2) + "\n")
    return path


def read_manifest(out_dir: str | Path) -> Manifest | None:
    """The manifest stored in out_dir, or None when there is none yet."""
    path = Path(out_dir) / MANIFEST_NAME
    if not path.exists():
        return None
    try:
        return Manifest.model_validate_json(path.read_text())
    except ValidationError as e:
        msg = f"{path} is not a valid manifest: {e.errors()[0]['msg']}"
        raise GridFileError(msg) from e
