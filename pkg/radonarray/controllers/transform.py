from abc import ABC, abstractmethod

from ..models import RadonGrid, SpaceTimeGrid
from ..pipeline import Pipeline


class TransformController(ABC):
    @abstractmethod
    def forward(self) -> RadonGrid:
        ...

    @abstractmethod
    def inverse(self) -> SpaceTimeGrid:
        ...


class ScenarioTransformController(TransformController):
    def __init__(self, pipeline: Pipeline):
        self.pipeline = pipeline

    def forward(self) -> RadonGrid:
        return self.pipeline.radon()

    def inverse(self) -> SpaceTimeGrid:
        return self.pipeline.invert()
