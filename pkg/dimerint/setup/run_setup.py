"""
RunSetup: configuration loader for the dimerint command-line tools.

RunSetup reads config/config.json and turns its three sections into the
objects a run needs:

- dimer_logger: the settings of the DimerLogger attached to "dimerint";
- quadrature: the default QuadratureSpec;
- output: the output format ("csv" or "json") and the significant digits
  written for real numbers.

Missing keys fall back to the class defaults. A missing or unreadable file is
reported through the logging module and the defaults are used for the whole
run. Command-line flags override file values when the RunConfig is built.

Version: 1.0.0
"""

import dataclasses
import datetime
import json
import logging
import pathlib

from typing import Any, Dict, Optional

from dimerint.core.lattice import WeightParams
from dimerint.core.quadrature import QuadratureSpec
from dimerint.core.validators import ParameterValidators
from dimerint.reporting.base import LogSettings
from dimerint.reporting.dimer_logger import DimerLogger

OUTPUT_FORMATS = ("csv", "json")


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """
    Settings shared by every subcommand of one run.
    """

    params: WeightParams
    quadrature: QuadratureSpec
    output_path: Optional[str] = None
    output_format: str = "csv"
    precision: int = 17

    def __post_init__(self):
        ParameterValidators.validate_choice(self.output_format, "format", OUTPUT_FORMATS)
        ParameterValidators.validate_integer_parameter(self.precision, "precision",
                                                       min_val=1, max_val=17)


class RunSetup:
    """
    Load the configuration file and build the run logger and RunConfig.

    Parameters
    ----------
    config_path: str, default=None
        Path to a configuration file; the packaged config.json is used when
        omitted.

    Example
    -------
    >>> setup = RunSetup()
    >>> setup.initialize_config()
    >>> setup.initialize_logger()
    >>> run = setup.build_run_config(1.0, 4.0, tol=1e-12)
    """

    CONFIG_PATH = pathlib.Path(__file__).parent.parent / "config" / "config.json"

    DEFAULT_LOGGER_SETTINGS = {
        field.name: field.default for field in dataclasses.fields(LogSettings)
    }

    DEFAULT_QUADRATURE_SETTINGS = {
        field.name: field.default for field in dataclasses.fields(QuadratureSpec)
    }

    DEFAULT_OUTPUT_SETTINGS = {
        "format": "csv",
        "precision": 17,
    }

    def __init__(self,
                 config_path: Optional[str] = None):
        if config_path:
            self.config_path = pathlib.Path(config_path)
        else:
            self.config_path = self.CONFIG_PATH

        self.config: Dict[str, Any] = {}
        self.logger: Optional[DimerLogger] = None

    def initialize_config(self) -> None:
        """
        Read the configuration file into self.config.

        Every failure is reported at ERROR level through the logging module
        and leaves self.config empty, so the defaults apply.
        """

        try:
            config = json.loads(self.config_path.read_bytes())
            if not isinstance(config, dict):
                raise ValueError("top level must be a JSON object")
            self.config = config
            return

        except FileNotFoundError:
            msg = (f"Configuration file not found: {self.config_path}. "
                   f"Using default settings.")

        except json.JSONDecodeError as e:
            msg = (f"Failed to parse the configuration file: {self.config_path}. "
                   f"Error: {e}. Using default settings.")

        except PermissionError:
            msg = (f"Permission denied when reading the configuration file: "
                   f"{self.config_path}. Using default settings.")

        except UnicodeDecodeError:
            msg = (f"Configuration file at {self.config_path} contains invalid UTF-8 "
                   f"characters. Using default settings.")

        except (OSError, ValueError) as e:
            msg = (f"An error occurred while reading the configuration file: "
                   f"{self.config_path}. Error: {e}. Using default settings.")

        logging.log(logging.ERROR, msg)
        self.config = {}

    def _section(self,
                 name: str,
                 defaults: Dict[str, Any]) -> Dict[str, Any]:
        section = self.config.get(name, {})
        if not isinstance(section, dict):
            logging.log(logging.ERROR,
                        f"The '{name}' section of {self.config_path} is not an object. "
                        f"Using default settings.")
            section = {}
        return {key: section.get(key, default) for key, default in defaults.items()}

    def logger_settings(self) -> Dict[str, Any]:
        return self._section("dimer_logger", self.DEFAULT_LOGGER_SETTINGS)

    def quadrature_settings(self) -> Dict[str, Any]:
        return self._section("quadrature", self.DEFAULT_QUADRATURE_SETTINGS)

    def output_settings(self) -> Dict[str, Any]:
        return self._section("output", self.DEFAULT_OUTPUT_SETTINGS)

    def initialize_logger(self,
                          log_level: Optional[str] = None) -> DimerLogger:
        """
        Build the DimerLogger from the dimer_logger section.

        Parameters
        ----------
        log_level: str, default=None
            Overrides the configured level.

        Raises
        ------
        ValueError, TypeError
            If a logger setting is invalid.
        """

        settings = self.logger_settings()
        if log_level is not None:
            settings["log_level"] = log_level

        try:
            self.logger = DimerLogger(**settings)
        except (TypeError, ValueError, IOError) as e:
            logging.log(logging.ERROR, f"An error occurred during logger initialization: {e}.")
            raise

        self.logger.banner([
            "Initializing dimerint",
            f"- Logger Name: {settings['logger_name']}",
            f"- Logging Level: {settings['log_level']}",
            f"- Log to File: {settings['log_to_file']}",
            f"- Configuration: {self.config_path}",
            f"- Initialization Timestamp: {datetime.datetime.now()}",
        ])
        return self.logger

    def build_run_config(self,
                         a: float,
                         b: float,
                         output_path: Optional[str] = None,
                         tol: Optional[float] = None,
                         output_format: Optional[str] = None) -> RunConfig:
        """
        Combine file settings with command-line overrides.

        Parameters
        ----------
        a, b: float
            Edge weights.

        output_path: str, default=None
            Output file; standard output when None.

        tol: float, default=None
            Overrides the quadrature abs_tol.

        output_format: str, default=None
            Overrides the output format.
        """

        quadrature = self.quadrature_settings()
        if tol is not None:
            quadrature["abs_tol"] = tol

        output = self.output_settings()
        if output_format is not None:
            output["format"] = output_format

        return RunConfig(params=WeightParams(a, b),
                         quadrature=QuadratureSpec(**quadrature),
                         output_path=output_path,
                         output_format=output["format"],
                         precision=output["precision"])
