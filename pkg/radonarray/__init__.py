from .api import RadonArrayAPI
from .assertion import ScenarioManifestAssertion
from .errors import (
    BehindArrayError,
    ConfigError,
    GridFileError,
    IllConditionedTriangulationError,
    InvalidArgumentError,
    NoArrivalError,
    RadonArrayError,
    StageError,
    SubArraySizingError,
)
from .models import (
    ArrayGeometry,
    FarFieldSource,
    LocalizationSettings,
    NearFieldSource,
    PulseSpec,
    RadonGrid,
    ScenarioConfig,
    SemblanceGrid,
    SpaceTimeGrid,
)
from .pipeline import ScenarioPipeline
