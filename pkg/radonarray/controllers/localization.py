from abc import ABC, abstractmethod

from ..models import LocalizationResult, PositionEstimate
from ..pipeline import Pipeline


class LocalizationController(ABC):
    @abstractmethod
    def localize(self) -> LocalizationResult:
        ...

    @property
    @abstractmethod
    def position(self) -> PositionEstimate | None:
        ...


class ScenarioLocalizationController(LocalizationController):
    def __init__(self, pipeline: Pipeline):
        self.pipeline = pipeline

    def localize(self) -> LocalizationResult:
        return self.pipeline.localize()

    @property
    def position(self) -> PositionEstimate | None:
        return self.pipeline.manifest.position
