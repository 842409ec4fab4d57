from abc import ABC, abstractmethod

from ..models import SemblanceGrid
from ..pipeline import Pipeline


class DetectionController(ABC):
    @abstractmethod
    def semblance(self) -> SemblanceGrid:
        ...


class ScenarioDetectionController(DetectionController):
    def __init__(self, pipeline: Pipeline):
        self.pipeline = pipeline

    def semblance(self) -> SemblanceGrid:
        return self.pipeline.semblance()
