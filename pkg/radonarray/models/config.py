from hashlib import sha256
from pathlib import Path
from typing import Annotated, Literal, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..errors import ConfigError
from .geometry import PulseSpec
from .grids import WindowShape
from .sources import FarFieldSource, NearFieldSource, SourceSpec

Auto = Literal["auto"]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ArraySection(_Section):
    element_count: int = Field(default=251, ge=2)
    carrier_freq: float = Field(default=24e9, gt=0)


class PulseSection(_Section):
    center_freq: float = Field(default=16e9, gt=0)
    single_side_bandwidth: float = Field(default=8e9, gt=0)
    amplitude: float = 1.0

    def to_pulse(self) -> PulseSpec:
        return PulseSpec(
            center_freq=self.center_freq,
            single_side_bandwidth=self.single_side_bandwidth,
            amplitude=self.amplitude,
        )


class FarFieldEntry(_Section):
    kind: Literal["far_field"]
    slowness: float
    delay: float
    amplitude: float = 1.0


class NearFieldEntry(_Section):
    kind: Literal["near_field"]
    x0: float
    z0: float = Field(gt=0)
    delay: float
    amplitude: float = 1.0


SourceEntry = Annotated[Union[FarFieldEntry, NearFieldEntry], Field(discriminator="kind")]


class SamplingSection(_Section):
    dt: float | Auto = "auto"
    t_start: float | Auto = "auto"
    n_t: int | Auto = "auto"
    noise_std: float = Field(default=0.0, ge=0)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _positive_explicit_values(self):
        if self.dt != "auto" and self.dt <= 0:
            msg = "dt must be positive"
            raise ValueError(msg)
        if self.n_t != "auto" and self.n_t < 1:
            msg = "n_t must be at least 1"
            raise ValueError(msg)
        return self


class RadonSection(_Section):
    n_p: int = Field(default=501, ge=2)
    tau_padding: float | Auto = "auto"


class SemblanceSection(_Section):
    window_shape: WindowShape = "rectangular"
    window_len: int | Auto = "auto"
    epsilon: float = Field(default=0.2, gt=0, lt=1)
    energy_floor: float = Field(default=1e-6, ge=0, lt=1)


class FilterSection(_Section):
    guard_cells: int = Field(default=1, ge=0)
    taper_cells: int = Field(default=2, ge=0)


class LocalizationSettings(_Section):
    """Knobs of the sub-array localization stage.

    window_len and window_shape are filled from the semblance section when the
    settings are derived from a ScenarioConfig.
    """

    theta_ff: float = Field(default=0.95, gt=0, lt=1)
    k_max: int = Field(default=32, ge=2)
    min_subarray_elements: int = Field(default=4, ge=2)
    energy_gate: float = Field(default=0.25, ge=0, le=1)
    condition_bound: float = Field(default=1e6, gt=1)
    n_p: int = Field(default=501, ge=3)
    window_len: int = Field(default=1, ge=1)
    window_shape: WindowShape = "rectangular"


class ScenarioConfig(_Section):
    """A complete scenario file: one section per processing module."""

    array: ArraySection = ArraySection()
    pulse: PulseSection = PulseSection()
    sources: list[SourceEntry] = []
    sampling: SamplingSection = SamplingSection()
    radon: RadonSection = RadonSection()
    semblance: SemblanceSection = SemblanceSection()
    filter: FilterSection = FilterSection()
    localization: LocalizationSettings = LocalizationSettings()

    def build_sources(self) -> list[SourceSpec]:
        pulse = self.pulse.to_pulse()
        sources: list[SourceSpec] = []
        for entry in self.sources:
            if isinstance(entry, FarFieldEntry):
                sources.append(
                    FarFieldSource(
                        slowness=entry.slowness,
                        delay=entry.delay,
                        pulse=pulse.scaled(entry.amplitude),
                    )
                )
            else:
                sources.append(
                    NearFieldSource(
                        x0=entry.x0,
                        z0=entry.z0,
                        delay=entry.delay,
                        pulse=pulse.scaled(entry.amplitude),
                    )
                )
        return sources

    @property
    def scenario_hash(self) -> str:
        """sha256 of the canonical JSON form of the validated scenario."""
        return sha256(self.model_dump_json().encode()).hexdigest()

    def with_seed(self, seed: int | None) -> "ScenarioConfig":
        if seed is None:
            return self
        return self.model_copy(
            update={"sampling": self.sampling.model_copy(update={"seed": seed})}
        )

    @classmethod
    def from_yaml(cls, text: str) -> "ScenarioConfig":
        """Parse and validate a scenario document.

        Validation errors are reported against the line of the offending key.
        """
        try:
            document = yaml.safe_load(text)
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            line = mark.line + 1 if mark is not None else None
            msg = f"malformed YAML: {getattr(e, 'problem', e)}"
            raise ConfigError(msg, line) from e

        if document is None:
            document = {}
        if not isinstance(document, dict):
            msg = "a scenario file must be a mapping of sections"
            raise ConfigError(msg, 1)

        try:
            config = cls.model_validate(document)
        except ValidationError as e:
            raise _config_error(text, e.errors()[0], ()) from e

        try:
            config.pulse.to_pulse()
        except ValidationError as e:
            raise _config_error(text, e.errors()[0], ("pulse",)) from e

        # |s| <= 1/c is checked on the built source models
        for index, entry in enumerate(config.sources):
            try:
                config.model_copy(update={"sources": [entry]}).build_sources()
            except ValidationError as e:
                raise _config_error(text, e.errors()[0], ("sources", index)) from e
        return config

    @classmethod
    def from_file(cls, path: str | Path) -> "ScenarioConfig":
        return cls.from_yaml(Path(path).read_text())


def _line_of(text: str, location: tuple) -> int | None:
    """1-based line of the deepest YAML node along a pydantic error location."""
    try:
        node = yaml.compose(text)
    except yaml.YAMLError:
        return None
    if node is None:
        return None

    line = node.start_mark.line + 1
    for part in location:
        if isinstance(node, yaml.MappingNode):
            match = next(
                ((key, value) for key, value in node.value if key.value == str(part)), None
            )
            if match is None:
                # discriminator tags and missing keys have no node of their own
                continue
            key, node = match
            line = key.start_mark.line + 1
        elif isinstance(node, yaml.SequenceNode) and isinstance(part, int):
            if part >= len(node.value):
                break
            node = node.value[part]
            line = node.start_mark.line + 1
    return line


def _config_error(text: str, error: dict, prefix: tuple) -> ConfigError:
    location = prefix + tuple(error["loc"])
    msg = f"{'.'.join(str(part) for part in location)}: {error['msg']}"
    return ConfigError(msg, _line_of(text, location))
