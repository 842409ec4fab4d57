from abc import ABC, abstractmethod
from pathlib import Path

from .file_handlers import read_grid
from .pipeline import Pipeline


class ManifestAssertion(ABC):
    @property
    @abstractmethod
    def band_count(self) -> int:
        ...

    @abstractmethod
    def assert_bands_detected(self, count: int):
        ...

    @abstractmethod
    def assert_no_detections(self):
        ...

    @abstractmethod
    def assert_slowness_detected(self, slowness: float):
        ...

    @abstractmethod
    def assert_position_within(self, x0: float, z0: float, *, range_tol: float, cross_tol: float):
        ...

    @abstractmethod
    def assert_stage_failed(self, stage: str):
        ...

    @abstractmethod
    def assert_same_payloads(self, other_dir: str | Path):
        ...


class ScenarioManifestAssertion(ManifestAssertion):
    def __init__(self, pipeline: Pipeline):
        self.pipeline = pipeline

    @property
    def band_count(self) -> int:
        """Return the number of slowness bands the filter stage detected."""
        return len(self.pipeline.manifest.bands or [])

    def assert_bands_detected(self, count: int):
        """Assert exactly `count` plane-wave bands were detected."""
        assert self.band_count == count, f"detected {self.band_count} bands, expected {count}"

    def assert_no_detections(self):
        assert self.band_count == 0

    def assert_slowness_detected(self, slowness: float):
        """Assert some detected band contains the slowness."""
        bands = self.pipeline.manifest.bands or []
        assert any(band.contains(slowness) for band in bands), f"{slowness} s/m not in {bands}"

    def assert_position_within(self, x0: float, z0: float, *, range_tol: float, cross_tol: float):
        """Assert the fused position matches (x0, z0) in range and cross-range.

        Tolerances are fractions of the true range. Range error is measured along
        the line of sight to the true source, cross-range error across it.
        """
        position = self.pipeline.manifest.position
        assert position is not None, "no position estimate was recorded"

        true_range = (x0**2 + z0**2) ** 0.5
        ux, uz = x0 / true_range, z0 / true_range
        dx, dz = position.x0 - x0, position.z0 - z0
        along = abs(dx * ux + dz * uz)
        across = abs(-dx * uz + dz * ux)
        assert along <= range_tol * true_range, f"range error {along:.4g} m"
        assert across <= cross_tol * true_range, f"cross-range error {across:.4g} m"

    def assert_stage_failed(self, stage: str):
        record = self.pipeline.manifest.stage(stage)
        assert record is not None and record.error is not None

    def assert_same_payloads(self, other_dir: str | Path):
        """Assert every grid file of this run is byte-identical in another run directory."""
        other_dir = Path(other_dir)
        for entry in self.pipeline.manifest.files:
            mine = read_grid(self.pipeline.out_dir / entry.name).to_bytes()
            theirs = read_grid(other_dir / entry.name).to_bytes()
            assert mine == theirs, f"{entry.name} differs"
