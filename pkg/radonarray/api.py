from abc import ABC, abstractmethod
from pathlib import Path

from .assertion import ScenarioManifestAssertion
from .controllers import (
    ScenarioDetectionController,
    ScenarioFilteringController,
    ScenarioLocalizationController,
    ScenarioSynthesisController,
    ScenarioTransformController,
)
from .models import (
    LocalizationResult,
    Manifest,
    PositionEstimate,
    RadonGrid,
    ScenarioConfig,
    SemblanceGrid,
    SlownessBand,
    SpaceTimeGrid,
)
from .pipeline import ScenarioPipeline


class API(ABC):
    @abstractmethod
    def synthesize(self) -> SpaceTimeGrid:
        ...

    @abstractmethod
    def forward(self) -> RadonGrid:
        ...

    @abstractmethod
    def semblance(self) -> SemblanceGrid:
        ...

    @abstractmethod
    def filter(self) -> RadonGrid:
        ...

    @abstractmethod
    def inverse(self) -> SpaceTimeGrid:
        ...

    @abstractmethod
    def localize(self) -> LocalizationResult:
        ...

    @abstractmethod
    def run(self) -> Manifest:
        ...

    @abstractmethod
    def assert_bands_detected(self, count: int):
        ...

    @abstractmethod
    def assert_no_detections(self):
        ...

    @abstractmethod
    def assert_position_within(self, x0: float, z0: float, *, range_tol: float, cross_tol: float):
        ...

    @abstractmethod
    def assert_same_payloads(self, other_dir: str | Path):
        ...


class RadonArrayAPI(API):
    def __init__(
        self,
        config: ScenarioConfig | str | Path,
        out_dir: str | Path,
        stage_input: str | Path | None = None,
        *,
        seed: int | None = None,
    ):
        """Initialize a new RadonArrayAPI instance.

        Parameters
        ----------
        config (ScenarioConfig | str | Path): Scenario, or the path of a scenario YAML file.
        out_dir (str | Path): Directory the stage files and manifest are written to.
        stage_input (str | Path, optional): Directory holding earlier stage files. Defaults to out_dir.
        seed (int, optional): Overrides sampling.seed. Defaults to None.
        """
        if not isinstance(config, ScenarioConfig):
            config = ScenarioConfig.from_file(config)
        self.config = config.with_seed(seed)

        self.pipeline = ScenarioPipeline(self.config, out_dir, stage_input)
        self.synthesis_controller = ScenarioSynthesisController(self.pipeline)
        self.transform_controller = ScenarioTransformController(self.pipeline)
        self.detection_controller = ScenarioDetectionController(self.pipeline)
        self.filtering_controller = ScenarioFilteringController(self.pipeline)
        self.localization_controller = ScenarioLocalizationController(self.pipeline)
        self.assertions = ScenarioManifestAssertion(self.pipeline)

    def synthesize(self) -> SpaceTimeGrid:
        return self.synthesis_controller.synthesize()

    def forward(self) -> RadonGrid:
        return self.transform_controller.forward()

    def semblance(self) -> SemblanceGrid:
        return self.detection_controller.semblance()

    def filter(self) -> RadonGrid:
        return self.filtering_controller.filter()

    def inverse(self) -> SpaceTimeGrid:
        return self.transform_controller.inverse()

    def localize(self) -> LocalizationResult:
        return self.localization_controller.localize()

    def run(self) -> Manifest:
        return self.pipeline.run()

    @property
    def manifest(self) -> Manifest:
        return self.pipeline.manifest

    @property
    def bands(self) -> list[SlownessBand]:
        return self.filtering_controller.bands

    @property
    def position(self) -> PositionEstimate | None:
        return self.localization_controller.position

    def assert_bands_detected(self, count: int):
        self.assertions.assert_bands_detected(count)

    def assert_no_detections(self):
        self.assertions.assert_no_detections()

    def assert_slowness_detected(self, slowness: float):
        self.assertions.assert_slowness_detected(slowness)

    def assert_position_within(self, x0: float, z0: float, *, range_tol: float, cross_tol: float):
        self.assertions.assert_position_within(x0, z0, range_tol=range_tol, cross_tol=cross_tol)

    def assert_stage_failed(self, stage: str):
        self.assertions.assert_stage_failed(stage)

    def assert_same_payloads(self, other_dir: str | Path):
        self.assertions.assert_same_payloads(other_dir)
