from pydantic import BaseModel

from .analysis import SlownessBand
from .localization import PositionEstimate


class FileEntry(BaseModel):
    name: str
    kind: str
    sha256: str


class StageRecord(BaseModel):
    name: str
    seconds: float
    error: str | None = None


class Manifest(BaseModel):
    """Everything a pipeline run wrote to its output directory, and what it found."""

    scenario_hash: str
    files: list[FileEntry] = []
    stages: list[StageRecord] = []
    bands: list[SlownessBand] | None = None
    suppression_db: float | None = None
    position: PositionEstimate | None = None

    def record_file(self, entry: FileEntry) -> None:
        self.files = [f for f in self.files if f.name != entry.name] + [entry]

    def record_stage(self, record: StageRecord) -> None:
        self.stages = [s for s in self.stages if s.name != record.name] + [record]

    def file(self, name: str) -> FileEntry | None:
        return next((f for f in self.files if f.name == name), None)

    def stage(self, name: str) -> StageRecord | None:
        return next((s for s in self.stages if s.name == name), None)
