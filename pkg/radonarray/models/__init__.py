from .analysis import EllipseLocus, SlownessBand, SlownessMask, SlownessProfile, SquintReport
from .config import LocalizationSettings, ScenarioConfig
from .geometry import SPEED_OF_LIGHT, ArrayGeometry, PulseSpec
from .grids import RadonGrid, SemblanceGrid, SpaceTimeGrid, WindowShape
from .localization import AoAEstimate, LocalizationResult, PositionEstimate, SubArray
from .manifest import FileEntry, Manifest, StageRecord
from .sources import FarFieldSource, NearFieldSource, SourceSpec
