"""
This module provides LogSettings and the BaseLogger class, which owns the
handlers of the "dimerint" logger.

Library modules log through logging.getLogger(__name__) and never attach
handlers themselves; their records propagate to the logger configured here.
Console output goes to standard error, so CSV and JSON written to standard
output by the command-line front end stay machine readable. Console output is
colour coded with 'coloredlogs'; file output uses a size-rotated log file.

Version: 1.0.0
"""

import dataclasses
import logging
import pathlib
import sys

from logging.handlers import RotatingFileHandler

import coloredlogs

from dimerint.core.validators import ParameterValidators

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

LOG_FORMATS = (
    "%(asctime)s - %(levelname)s - %(message)s",
    "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    "%(levelname)s - %(message)s",
    "%(message)s",
)

LEVEL_STYLES = {
    "debug": {"color": "blue"},
    "info": {"color": "green"},
    "warning": {"color": "yellow"},
    "error": {"color": "red"},
    "critical": {"color": "red", "bold": True},
}


@dataclasses.dataclass(frozen=True)
class LogSettings:
    """
    Validated settings of a run logger.

    Parameters
    ----------
    logger_name: str, default="dimerint"
        Name of the logger; "dimerint" captures every library record.

    logger_path: str, default="logs"
        Directory for the log file.

    log_level: str, default="INFO"
        One of LOG_LEVELS, case insensitive.

    log_to_console: bool, default=True
        Write records to standard error.

    log_to_file: bool, default=False
        Write records to <logger_path>/<logger_name>.log.

    max_bytes: int, default=5000000
        Size at which the log file is rotated.

    backup_count: int, default=5
        Number of rotated files kept.

    log_format: str
        One of LOG_FORMATS.

    use_color: bool, default=True
        Colour console records by level.
    """

    logger_name: str = "dimerint"
    logger_path: str = "logs"
    log_level: str = "INFO"
    log_to_console: bool = True
    log_to_file: bool = False
    max_bytes: int = 5000000
    backup_count: int = 5
    log_format: str = LOG_FORMATS[0]
    use_color: bool = True

    def __post_init__(self):
        for field in ("logger_name", "logger_path"):
            ParameterValidators.validate_string_parameter(getattr(self, field), field)
        ParameterValidators.validate_log_level(self.log_level, LOG_LEVELS)
        for flag in ("log_to_console", "log_to_file", "use_color"):
            ParameterValidators.validate_boolean_parameter(getattr(self, flag), flag)
        ParameterValidators.validate_integer_parameter(self.max_bytes, "max_bytes", min_val=1)
        ParameterValidators.validate_integer_parameter(self.backup_count, "backup_count",
                                                       min_val=0)
        ParameterValidators.validate_log_format(self.log_format, LOG_FORMATS)

        # Frozen: normalise through object.__setattr__
        object.__setattr__(self, "log_level", self.log_level.upper().strip())

    @property
    def log_file(self) -> pathlib.Path:
        return pathlib.Path(self.logger_path) / f"{self.logger_name}.log"

    @property
    def level_value(self) -> int:
        return getattr(logging, self.log_level)


class BaseLogger:
    """
    Base class for DimerLogger objects.

    The handlers of the named logger are rebuilt from the settings on
    creation, so a second logger with the same name replaces the first one's
    handlers. If neither console nor file output is enabled, console output
    is switched on with a warning.

    Parameters
    ----------
    settings: LogSettings
        Validated logger settings.
    """

    def __init__(self, settings: LogSettings):
        if not isinstance(settings, LogSettings):
            raise TypeError(f"settings must be LogSettings, got {type(settings).__name__}.")

        self.settings = settings
        self.logger = logging.getLogger(settings.logger_name)
        self.logger.propagate = False

        self._attach_handlers()

    @property
    def log_level(self) -> str:
        return self.settings.log_level

    @property
    def log_format(self) -> str:
        return self.settings.log_format

    @property
    def log_file(self) -> pathlib.Path:
        return self.settings.log_file

    def _attach_handlers(self) -> None:
        """
        Drop the current handlers and attach those the settings ask for.
        """

        self._remove_handlers()
        self.logger.setLevel(self.settings.level_value)

        fallback = not (self.settings.log_to_console or self.settings.log_to_file)
        if fallback:
            self.settings = dataclasses.replace(self.settings, log_to_console=True)

        if self.settings.log_to_console:
            self._attach_console_handler()
        if self.settings.log_to_file:
            self._attach_file_handler()

        if fallback:
            self.logger.warning("Both console and file output were disabled; "
                                "logging to the console.")

    def _remove_handlers(self) -> None:
        """
        Close and detach every handler of the logger.
        """

        for handler in list(self.logger.handlers):
            self.logger.removeHandler(handler)
            try:
                handler.close()
            except OSError as e:
                self.logger.error(f"Could not close {type(handler).__name__}: {e}")

    def _formatter(self, handler: logging.Handler) -> logging.Formatter:
        if self.settings.use_color and isinstance(handler, _ConsoleHandler):
            return coloredlogs.ColoredFormatter(fmt=self.settings.log_format,
                                                level_styles=LEVEL_STYLES)
        return logging.Formatter(fmt=self.settings.log_format)

    def _attach(self, handler: logging.Handler) -> None:
        handler.setLevel(self.settings.level_value)
        handler.setFormatter(self._formatter(handler))
        self.logger.addHandler(handler)

    def _attach_console_handler(self) -> None:
        self._attach(_ConsoleHandler())

    def _attach_file_handler(self) -> None:
        """
        Attach a size-rotated handler writing to settings.log_file.

        Raises
        ------
        IOError
            If the log directory cannot be created or written to.
        """

        directory = pathlib.Path(self.settings.logger_path)
        try:
            directory.mkdir(parents=True, exist_ok=True)
            ParameterValidators.validate_directory_is_writable(directory)
        except (IOError, ValueError) as e:
            raise IOError(f"The log directory {directory} cannot be used. Error: {e}.")

        self._attach(RotatingFileHandler(filename=str(self.settings.log_file),
                                         maxBytes=self.settings.max_bytes,
                                         backupCount=self.settings.backup_count))

    def _refresh_handlers(self) -> None:
        """
        Apply the current level and formats to the attached handlers.
        """

        self.logger.setLevel(self.settings.level_value)
        for handler in self.logger.handlers:
            handler.setLevel(self.settings.level_value)
            handler.setFormatter(self._formatter(handler))


class _ConsoleHandler(logging.StreamHandler):
    """
    Stream handler bound to whatever sys.stderr is at emit time.
    """

    def __init__(self):
        logging.Handler.__init__(self)

    @property
    def stream(self):
        return sys.stderr
