from abc import ABC, abstractmethod

from ..models import SpaceTimeGrid
from ..pipeline import Pipeline


class SynthesisController(ABC):
    @abstractmethod
    def synthesize(self) -> SpaceTimeGrid:
        ...


class ScenarioSynthesisController(SynthesisController):
    def __init__(self, pipeline: Pipeline):
        self.pipeline = pipeline

    def synthesize(self) -> SpaceTimeGrid:
        return self.pipeline.synth()
