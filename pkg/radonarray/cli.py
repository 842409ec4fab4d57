import argparse
import logging
import sys
from importlib import resources
from logging import getLogger
from pathlib import Path

from .api import RadonArrayAPI
from .errors import ConfigError, GridFileError, RadonArrayError, StageError
from .file_handlers import export_plot_data
from .models import Manifest, ScenarioConfig
from .pipeline import STAGES

logger = getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_STAGE = 3
EXIT_IO = 4

STAGE_COMMANDS = {
    "synth": "synthesize",
    "radon": "forward",
    "semblance": "semblance",
    "filter": "filter",
    "invert": "inverse",
    "localize": "localize",
}


def reference_scenario_text() -> str:
    return resources.files("radonarray").joinpath("scenarios/reference.yaml").read_text()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radonarray",
        description="Radon-domain far-field suppression and near-field localization",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log debug detail")
    commands = parser.add_subparsers(dest="command", required=True)

    for name in ("pipeline", *STAGES):
        command = commands.add_parser(
            name,
            help="run every stage" if name == "pipeline" else f"run the {name} stage",
            formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        )
        command.add_argument(
            "--config", default=None, help="scenario YAML file; the bundled reference if omitted"
        )
        command.add_argument("--out", required=True, help="output directory")
        command.add_argument("--seed", type=int, default=None, help="overrides sampling.seed")
        command.add_argument(
            "--stage-input", default=None, help="directory holding earlier stage files"
        )

    export = commands.add_parser(
        "export",
        help="re-emit a grid file as csv or binary plot data",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    export.add_argument("grid_file", help="grid file written by a stage")
    export.add_argument("--out", required=True, help="output file")
    export.add_argument("--format", choices=("csv", "binary"), default="csv")
    return parser


def _load_config(path: str | None) -> ScenarioConfig:
    if path is None:
        return ScenarioConfig.from_yaml(reference_scenario_text())
    return ScenarioConfig.from_file(path)


def exit_code(error: Exception) -> int:
    """Log the error and return the exit status it maps to."""
    if isinstance(error, ConfigError):
        logger.error(f"Invalid scenario: {error}")
        return EXIT_CONFIG
    if isinstance(error, GridFileError):
        logger.error(f"Unreadable grid file: {error}")
        return EXIT_IO
    if isinstance(error, StageError):
        if isinstance(error.cause, GridFileError):
            logger.error(f"Unreadable input to stage {error.stage}: {error.cause}")
            return EXIT_IO
        logger.error(f"Stage {error.stage} failed: {error.cause}")
        return EXIT_STAGE
    if isinstance(error, RadonArrayError):
        logger.error(str(error))
        return EXIT_STAGE
    if isinstance(error, OSError):
        logger.error(f"I/O error: {error}")
        return EXIT_IO
    raise error


def run_pipeline(
    config: ScenarioConfig,
    out_dir: str | Path,
    seed: int | None = None,
    stage_input: str | Path | None = None,
) -> tuple[int, Manifest]:
    """Run every stage of a scenario into out_dir.

    Returns
    -------
    tuple[int, Manifest]: Exit status and the manifest as far as the run got.
    """
    api = RadonArrayAPI(config, out_dir, stage_input, seed=seed)
    try:
        manifest = api.run()
    except (RadonArrayError, OSError) as e:
        return exit_code(e), api.manifest
    bands = len(manifest.bands or [])
    logger.info(f"Pipeline finished: {bands} bands detected, position {manifest.position}")
    return EXIT_OK, manifest


def run(args: argparse.Namespace) -> int:
    if args.command == "export":
        export_plot_data(args.grid_file, args.out, args.format)
        return EXIT_OK

    config = _load_config(args.config)
    if args.command == "pipeline":
        status, _ = run_pipeline(config, args.out, args.seed, args.stage_input)
        return status

    api = RadonArrayAPI(config, args.out, args.stage_input, seed=args.seed)
    getattr(api, STAGE_COMMANDS[args.command])()
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        return run(args)
    except (RadonArrayError, OSError) as e:
        return exit_code(e)


if __name__ == "__main__":
    sys.exit(main())
