from abc import ABC, abstractmethod

from ..models import RadonGrid, SlownessBand
from ..pipeline import Pipeline


class FilteringController(ABC):
    @abstractmethod
    def filter(self) -> RadonGrid:
        ...

    @property
    @abstractmethod
    def bands(self) -> list[SlownessBand]:
        ...


class ScenarioFilteringController(FilteringController):
    def __init__(self, pipeline: Pipeline):
        self.pipeline = pipeline

    def filter(self) -> RadonGrid:
        """Detect plane-wave bands from the semblance and notch them out of the Radon grid."""
        return self.pipeline.filter()

    @property
    def bands(self) -> list[SlownessBand]:
        return list(self.pipeline.manifest.bands or [])
