from .detection import ScenarioDetectionController
from .filtering import ScenarioFilteringController
from .localization import ScenarioLocalizationController
from .synthesis import ScenarioSynthesisController
from .transform import ScenarioTransformController
