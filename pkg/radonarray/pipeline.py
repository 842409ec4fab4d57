from abc import ABC, abstractmethod
from collections.abc import Iterator
from contextlib import contextmanager
from logging import getLogger
from pathlib import Path
from time import perf_counter

import numpy as np

from .errors import InvalidArgumentError, RadonArrayError, StageError
from .file_handlers import (
    GridFile,
    file_entry,
    read_grid,
    read_manifest,
    write_grid,
    write_manifest,
)
from .localization import localize_and_extract
from .models import (
    FarFieldSource,
    LocalizationResult,
    Manifest,
    NearFieldSource,
    RadonGrid,
    ScenarioConfig,
    SemblanceGrid,
    SpaceTimeGrid,
    StageRecord,
)
from .radon import default_p_axis, default_tau_axis, forward_radon, inverse_radon
from .semblance import default_window_len, detect_plane_waves, semblance, slowness_profile
from .slowness_filter import apply_mask, build_mask
from .wavefield import default_sampling, make_array, synthesize, trajectory_rms

logger = getLogger(__name__)

STAGES = ("synth", "radon", "semblance", "filter", "invert", "localize")

SPACETIME_FILE = "spacetime.grid"
RADON_FILE = "radon.grid"
SEMBLANCE_FILE = "semblance.grid"
FILTERED_RADON_FILE = "radon_filtered.grid"
FILTERED_SPACETIME_FILE = "spacetime_filtered.grid"
ENVELOPE_FILE = "envelope.grid"


class Pipeline(ABC):
    @abstractmethod
    def synth(self) -> SpaceTimeGrid:
        ...

    @abstractmethod
    def radon(self) -> RadonGrid:
        ...

    @abstractmethod
    def semblance(self) -> SemblanceGrid:
        ...

    @abstractmethod
    def filter(self) -> RadonGrid:
        ...

    @abstractmethod
    def invert(self) -> SpaceTimeGrid:
        ...

    @abstractmethod
    def localize(self) -> LocalizationResult:
        ...

    @abstractmethod
    def run(self) -> Manifest:
        ...

    @property
    @abstractmethod
    def manifest(self) -> Manifest:
        ...


class ScenarioPipeline(Pipeline):
    """Runs the processing chain of one scenario into an output directory.

    Every stage reads the files of the stages before it from `stage_input`
    (the output directory unless given), writes its own grid file to `out_dir`
    and records the file, its timing and its findings in manifest.json.
    """

    def __init__(
        self,
        config: ScenarioConfig,
        out_dir: str | Path,
        stage_input: str | Path | None = None,
    ) -> None:
        """Initialize a new ScenarioPipeline instance.

        Parameters
        ----------
        config (ScenarioConfig): Validated scenario.
        out_dir (str | Path): Directory the stage files and manifest are written to.
        stage_input (str | Path, optional): Directory holding the files of earlier
            stages. Defaults to out_dir.
        """
        self.config = config
        self.out_dir = Path(out_dir)
        self.stage_input = Path(stage_input) if stage_input is not None else self.out_dir
        self.geometry = make_array(config.array.element_count, config.array.carrier_freq)
        self.sources = config.build_sources()
        self.scenario_hash = config.scenario_hash
        existing = read_manifest(self.out_dir)
        if existing is not None and existing.scenario_hash == self.scenario_hash:
            self._manifest = existing
        else:
            self._manifest = Manifest(scenario_hash=self.scenario_hash)

    @property
    def manifest(self) -> Manifest:
        return self._manifest

    @contextmanager
    def _stage(self, name: str) -> Iterator[None]:
        logger.info(f"Stage {name} started")
        started = perf_counter()
        try:
            yield
        except StageError as e:
            self._fail(name, started, e)
            raise
        except RadonArrayError as e:
            error = StageError(name, e)
            self._fail(name, started, error)
            raise error from e
        seconds = perf_counter() - started
        self._manifest.record_stage(StageRecord(name=name, seconds=seconds))
        self._save_manifest()
        logger.info(f"Stage {name} finished in {seconds:.3f} s")

    def _fail(self, name: str, started: float, error: StageError) -> None:
        logger.error(f"Stage {name} failed: {error.cause}")
        self._manifest.record_stage(
            StageRecord(name=name, seconds=perf_counter() - started, error=str(error))
        )
        self._save_manifest()

    def _save_manifest(self) -> None:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        write_manifest(self.out_dir, self._manifest)

    def _write(self, name: str, grid_file: GridFile) -> None:
        path = write_grid(self.out_dir / name, grid_file)
        self._manifest.record_file(file_entry(path, grid_file.kind))

    def _read(self, name: str):
        return read_grid(self.stage_input / name).to_grid()

    def _axes(self, data: SpaceTimeGrid) -> tuple[np.ndarray, np.ndarray]:
        padding = self.config.radon.tau_padding
        tau_axis = default_tau_axis(data, None if padding == "auto" else padding)
        return default_p_axis(self.config.radon.n_p), tau_axis

    def _window_len(self, dt: float) -> int:
        window_len = self.config.semblance.window_len
        if window_len == "auto":
            return default_window_len(self.config.pulse.to_pulse(), dt)
        return window_len

    def synth(self) -> SpaceTimeGrid:
        sampling = self.config.sampling
        with self._stage("synth"):
            t_start, dt, n_t = default_sampling(
                self.geometry,
                self.sources,
                self.config.pulse.to_pulse(),
                dt=None if sampling.dt == "auto" else sampling.dt,
                t_start=None if sampling.t_start == "auto" else sampling.t_start,
            )
            data = synthesize(
                self.geometry,
                self.sources,
                t_start=t_start,
                dt=dt,
                n_t=n_t if sampling.n_t == "auto" else sampling.n_t,
                noise_std=sampling.noise_std,
                seed=sampling.seed,
            )
            self._write(SPACETIME_FILE, GridFile.from_grid(data, self.scenario_hash))
        return data

    def radon(self) -> RadonGrid:
        with self._stage("radon"):
            data = self._read(SPACETIME_FILE)
            p_axis, tau_axis = self._axes(data)
            radon = forward_radon(data, p_axis, tau_axis)
            self._write(RADON_FILE, GridFile.from_grid(radon, self.scenario_hash))
        return radon

    def semblance(self) -> SemblanceGrid:
        section = self.config.semblance
        with self._stage("semblance"):
            data = self._read(SPACETIME_FILE)
            p_axis, tau_axis = self._axes(data)
            grid = semblance(
                data,
                p_axis,
                tau_axis,
                self._window_len(data.dt),
                section.window_shape,
                section.energy_floor,
            )
            self._write(SEMBLANCE_FILE, GridFile.from_grid(grid, self.scenario_hash))
        return grid

    def filter(self) -> RadonGrid:
        with self._stage("filter"):
            radon = self._read(RADON_FILE)
            profile = slowness_profile(self._read(SEMBLANCE_FILE))
            bands = detect_plane_waves(profile, self.config.semblance.epsilon)
            mask = build_mask(
                bands,
                radon.p_axis,
                self.config.filter.guard_cells,
                self.config.filter.taper_cells,
            )
            filtered = apply_mask(radon, mask)
            self._manifest.bands = bands
            self._write(FILTERED_RADON_FILE, GridFile.from_grid(filtered, self.scenario_hash))
        return filtered

    def invert(self) -> SpaceTimeGrid:
        with self._stage("invert"):
            original = self._read(SPACETIME_FILE)
            filtered = inverse_radon(
                self._read(FILTERED_RADON_FILE), original.geometry, original.t_axis
            )
            self._manifest.suppression_db = self.suppression_db(original, filtered)
            self._write(FILTERED_SPACETIME_FILE, GridFile.from_grid(filtered, self.scenario_hash))
        return filtered

    def localize(self) -> LocalizationResult:
        settings = self.config.localization.model_copy(
            update={"window_shape": self.config.semblance.window_shape}
        )
        with self._stage("localize"):
            original = self._read(SPACETIME_FILE)
            filtered = self._read(FILTERED_SPACETIME_FILE)
            settings = settings.model_copy(update={"window_len": self._window_len(filtered.dt)})
            result = localize_and_extract(filtered, settings, original)
            self._manifest.position = result.position
            self._write(ENVELOPE_FILE, GridFile.from_localization(result, self.scenario_hash))
        return result

    def suppression_db(self, original: SpaceTimeGrid, filtered: SpaceTimeGrid) -> float | None:
        """Drop, in dB, of the far-field to near-field trajectory energy ratio.

        None unless the scenario holds both kinds of source.
        """
        far = [s for s in self.sources if isinstance(s, FarFieldSource)]
        near = [s for s in self.sources if isinstance(s, NearFieldSource)]
        if not far or not near:
            return None

        half_width = self.config.pulse.to_pulse().duration / 2.0

        def ratio(grid: SpaceTimeGrid) -> float:
            far_rms = np.sqrt(np.mean([trajectory_rms(grid, s, half_width) ** 2 for s in far]))
            near_rms = np.sqrt(np.mean([trajectory_rms(grid, s, half_width) ** 2 for s in near]))
            return float(far_rms / near_rms) if near_rms > 0 else float("inf")

        before, after = ratio(original), ratio(filtered)
        if before == 0 or not np.isfinite(before) or not np.isfinite(after):
            return None
        if after == 0:
            return float("inf")
        return float(20.0 * np.log10(before / after))

    def run_stage(self, name: str):
        if name not in STAGES:
            msg = f"unknown stage {name!r}"
            raise InvalidArgumentError(msg)
        return getattr(self, name)()

    def run(self) -> Manifest:
        for name in STAGES:
            self.run_stage(name)
        return self._manifest
