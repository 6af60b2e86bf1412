"""
Test suite for the setup/run_setup.py module

Version: 1.0.0
"""

import json
import pathlib
import tempfile
import unittest

from unittest.mock import patch

from dimerint.core.lattice import WeightParams
from dimerint.core.quadrature import QuadratureSpec
from dimerint.reporting.dimer_logger import DimerLogger
from dimerint.setup.run_setup import RunConfig, RunSetup


class TestRunSetupConfig(unittest.TestCase):
    """
    Test cases for reading the configuration file.
    """

    def setUp(self):
        """
        Prepare a temporary directory for configuration files.
        """

        self.tmp = tempfile.TemporaryDirectory()
        self.directory = pathlib.Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def _write(self, name, text):
        path = self.directory / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    def test_packaged_config_loads(self):
        """
        The packaged config.json has the three expected sections.
        """

        setup = RunSetup()
        setup.initialize_config()

        self.assertEqual(set(setup.config), {"dimer_logger", "quadrature", "output"})
        self.assertEqual(setup.output_settings()["precision"], 17)

    def test_missing_file_uses_defaults(self):
        """
        A missing file is logged at ERROR level and the defaults apply.
        """

        setup = RunSetup(str(self.directory / "absent.json"))

        with patch("logging.log") as mock_log:
            setup.initialize_config()

        self.assertEqual(setup.config, {})
        self.assertEqual(mock_log.call_args[0][0], 40)
        self.assertEqual(setup.logger_settings(), RunSetup.DEFAULT_LOGGER_SETTINGS)

    def test_malformed_json_uses_defaults(self):
        """
        Invalid JSON leaves the configuration empty.
        """

        setup = RunSetup(self._write("broken.json", "{not json"))

        with patch("logging.log") as mock_log:
            setup.initialize_config()

        self.assertEqual(setup.config, {})
        self.assertIn("Failed to parse", mock_log.call_args[0][1])

    def test_non_object_top_level(self):
        """
        A JSON array at the top level is rejected.
        """

        setup = RunSetup(self._write("list.json", "[1, 2]"))

        with patch("logging.log"):
            setup.initialize_config()

        self.assertEqual(setup.config, {})

    def test_partial_sections_fill_defaults(self):
        """
        Keys absent from a section take their default values.
        """

        config = {"quadrature": {"abs_tol": 1e-8}, "output": {"format": "json"}}
        setup = RunSetup(self._write("partial.json", json.dumps(config)))
        setup.initialize_config()

        quadrature = setup.quadrature_settings()
        self.assertEqual(quadrature["abs_tol"], 1e-8)
        self.assertEqual(quadrature["max_panels"], QuadratureSpec().max_panels)
        self.assertEqual(setup.output_settings(), {"format": "json", "precision": 17})


class TestRunSetupBuild(unittest.TestCase):
    """
    Test cases for building the logger and the RunConfig.
    """

    def setUp(self):
        """
        Load the packaged configuration.
        """

        self.setup = RunSetup()
        self.setup.initialize_config()

    def tearDown(self):
        if self.setup.logger is not None:
            self.setup.logger._remove_handlers()

    def test_initialize_logger(self):
        """
        The logger honours the level override and logs a banner.
        """

        with patch.object(DimerLogger, "banner") as mock_banner:
            logger = self.setup.initialize_logger("DEBUG")

        self.assertIsInstance(logger, DimerLogger)
        self.assertEqual(logger.log_level, "DEBUG")
        mock_banner.assert_called_once()

    def test_initialize_logger_invalid_level(self):
        """
        An invalid level override is re-raised after being reported.
        """

        with patch("logging.log"):
            with self.assertRaises(ValueError):
                self.setup.initialize_logger("LOUD")

    def test_build_run_config_overrides(self):
        """
        Command-line values override the file settings.
        """

        run = self.setup.build_run_config(1.0, 4.0, output_path="out.csv",
                                          tol=1e-12, output_format="json")

        self.assertIsInstance(run, RunConfig)
        self.assertEqual(run.params, WeightParams(1.0, 4.0))
        self.assertEqual(run.quadrature.abs_tol, 1e-12)
        self.assertEqual(run.output_format, "json")
        self.assertEqual(run.output_path, "out.csv")

    def test_build_run_config_defaults(self):
        """
        Without overrides the file values are used.
        """

        run = self.setup.build_run_config(0.5, 3.0)

        self.assertEqual(run.output_format, "csv")
        self.assertEqual(run.precision, 17)
        self.assertIsNone(run.output_path)

    def test_build_run_config_rejects_bad_weights(self):
        """
        Non-positive weights raise ValueError.
        """

        with self.assertRaises(ValueError):
            self.setup.build_run_config(0.0, 4.0)

    def test_run_config_validation(self):
        """
        RunConfig rejects unknown formats and out-of-range precision.
        """

        params = WeightParams(1.0, 4.0)
        with self.assertRaises(ValueError):
            RunConfig(params=params, quadrature=QuadratureSpec(), output_format="xml")

        with self.assertRaises(ValueError):
            RunConfig(params=params, quadrature=QuadratureSpec(), precision=40)


if __name__ == "__main__":
    unittest.main()
