"""
Test suite for the reporting/base.py module

Version: 1.0.0
"""

import contextlib
import io
import logging
import pathlib
import tempfile
import unittest

from logging.handlers import RotatingFileHandler

import coloredlogs

from dimerint.reporting.base import LOG_FORMATS, BaseLogger, LogSettings


class TestLogSettings(unittest.TestCase):
    """
    Test cases for the validation of LogSettings.
    """

    def test_defaults(self):
        """
        The defaults log INFO to the console only.
        """

        settings = LogSettings()

        self.assertEqual(settings.logger_name, "dimerint")
        self.assertEqual(settings.log_level, "INFO")
        self.assertTrue(settings.log_to_console)
        self.assertFalse(settings.log_to_file)
        self.assertEqual(settings.log_format, LOG_FORMATS[0])

    def test_level_is_normalised(self):
        """
        Levels are case insensitive and stored upper case.
        """

        settings = LogSettings(log_level=" debug")
        self.assertEqual(settings.log_level, "DEBUG")
        self.assertEqual(settings.level_value, logging.DEBUG)

    def test_invalid_values(self):
        """
        Bad names, levels, formats and sizes are rejected.
        """

        with self.assertRaises(ValueError):
            LogSettings(logger_name="")

        with self.assertRaises(ValueError):
            LogSettings(log_level="VERBOSE")

        with self.assertRaises(ValueError):
            LogSettings(log_format="%(name)s")

        with self.assertRaises(ValueError):
            LogSettings(max_bytes=0)

        with self.assertRaises(TypeError):
            LogSettings(max_bytes="big")

        with self.assertRaises(TypeError):
            LogSettings(use_color="yes")

    def test_log_file(self):
        """
        The log file is <path>/<name>.log.
        """

        settings = LogSettings(logger_name="run", logger_path="out")
        self.assertEqual(settings.log_file, pathlib.Path("out") / "run.log")


class TestBaseLogger(unittest.TestCase):
    """
    Test cases for the handler setup of the BaseLogger class.
    """

    def setUp(self):
        """
        Prepare a temporary log directory.
        """

        self.tmp = tempfile.TemporaryDirectory()
        self.loggers = []

    def tearDown(self):
        """
        Detach handlers of every logger created by a test.
        """

        for logger in self.loggers:
            logger._remove_handlers()
        self.tmp.cleanup()

    def _logger(self, name, **fields):
        fields.setdefault("use_color", False)
        logger = BaseLogger(LogSettings(logger_name=name, logger_path=self.tmp.name, **fields))
        self.loggers.append(logger)
        return logger

    def test_requires_settings(self):
        """
        Anything but LogSettings is refused.
        """

        with self.assertRaises(TypeError):
            BaseLogger({"logger_name": "dimerint"})

    def test_console_handler_only(self):
        """
        Console logging attaches exactly one stream handler and no file handler.
        """

        logger = self._logger("TestConsoleOnly")
        handlers = logger.logger.handlers

        self.assertEqual(len(handlers), 1)
        self.assertIsInstance(handlers[0], logging.StreamHandler)
        self.assertNotIsInstance(handlers[0], logging.FileHandler)
        self.assertFalse(logger.logger.propagate)

    def test_console_writes_to_stderr(self):
        """
        Console records go to the current standard error, not standard output.
        """

        logger = self._logger("TestConsoleStream", log_format="%(message)s")
        out, err = io.StringIO(), io.StringIO()

        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            logger.logger.info("quadrature converged")

        self.assertEqual(out.getvalue(), "")
        self.assertEqual(err.getvalue(), "quadrature converged\n")

    def test_colored_formatter(self):
        """
        use_color puts a coloredlogs formatter on the console handler.
        """

        logger = self._logger("TestColor", use_color=True)
        self.assertIsInstance(logger.logger.handlers[0].formatter, coloredlogs.ColoredFormatter)

    def test_file_handler(self):
        """
        File logging creates <path>/<name>.log through a rotating handler.
        """

        logger = self._logger("TestFileLogging", log_to_console=False, log_to_file=True)
        logger.logger.info("written to file")

        self.assertTrue(any(isinstance(h, RotatingFileHandler) for h in logger.logger.handlers))
        self.assertEqual(logger.log_file, pathlib.Path(self.tmp.name) / "TestFileLogging.log")
        self.assertTrue(logger.log_file.exists())

    def test_no_output_falls_back_to_console(self):
        """
        Disabling both outputs switches console logging back on.
        """

        logger = self._logger("TestNoOutput", log_to_console=False, log_to_file=False)

        self.assertTrue(logger.settings.log_to_console)
        self.assertEqual(len(logger.logger.handlers), 1)

    def test_recreation_does_not_duplicate_handlers(self):
        """
        Building a second logger with the same name resets the handlers.
        """

        self._logger("TestRecreate")
        logger = self._logger("TestRecreate")

        self.assertEqual(len(logger.logger.handlers), 1)


if __name__ == "__main__":
    unittest.main()
