"""
This module defines the DimerLogger class, the run logger of the dimerint
command-line tools.

DimerLogger configures the "dimerint" logger, so records emitted by the
numerical modules (quadrature panel counts, case routing, imaginary-residual
warnings, count-mismatch windows, suite timings) appear alongside the
messages of the front end. The level and format can be changed after
creation, which the CLI uses for its --verbose flag.

Version: 1.0.0
"""

import dataclasses
import logging
import traceback

from typing import Iterable, Optional

from dimerint.reporting.base import BaseLogger, LogSettings


class DimerLogger(BaseLogger):
    """
    Run logger with console and optional rotating-file output.

    Parameters
    ----------
    settings: LogSettings, default=None
        Base settings; LogSettings() when omitted.

    **overrides
        LogSettings fields replacing those of settings, for example
        DimerLogger(log_level="DEBUG", use_color=False).
    """

    def __init__(self,
                 settings: Optional[LogSettings] = None,
                 **overrides):
        super().__init__(dataclasses.replace(settings or LogSettings(), **overrides))

    def _log_message(self,
                     log_level: int,
                     msg: str,
                     exc_info: bool = False) -> None:
        """
        Log msg at log_level, appending the active traceback when exc_info
        is set. Failures while logging are reported instead of raised.
        """

        if exc_info:
            msg = f"{msg}\n{traceback.format_exc().rstrip()}"

        try:
            self.logger.log(log_level, msg)
        except Exception as e:
            self.logger.log(logging.ERROR,
                            f"{type(e).__name__} encountered while logging the message: "
                            f"{msg}\n{traceback.format_exc()}")

    def debug(self, msg: str) -> None:
        self._log_message(logging.DEBUG, msg)

    def info(self, msg: str) -> None:
        self._log_message(logging.INFO, msg)

    def warning(self, msg: str) -> None:
        self._log_message(logging.WARNING, msg)

    def error(self,
              msg: str,
              exc_info: bool = False) -> None:
        """
        Log msg at ERROR level.

        Parameters
        ----------
        exc_info: bool, default=False
            Append the traceback of the exception being handled.
        """

        self._log_message(logging.ERROR, msg, exc_info)

    def critical(self,
                 msg: str,
                 exc_info: bool = False) -> None:
        self._log_message(logging.CRITICAL, msg, exc_info)

    def banner(self, lines: Iterable[str]) -> None:
        """
        Log lines at INFO level between two rules.
        """

        self.info("=" * 70)
        for line in lines:
            self.info(line)
        self.info("=" * 70)

    def set_log_level(self,
                      log_level: str) -> None:
        """
        Change the level of the logger and all of its handlers.

        Raises
        ------
        ValueError
            If log_level is not one of LOG_LEVELS.
        """

        self.settings = dataclasses.replace(self.settings, log_level=log_level)
        self._refresh_handlers()

    def set_log_format(self,
                       log_format: str) -> None:
        """
        Change the message format of every handler.
        """

        self.settings = dataclasses.replace(self.settings, log_format=log_format)
        self._refresh_handlers()
