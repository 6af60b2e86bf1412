"""
This module provides the ParameterValidators class, a collection of static
methods that validate the parameters accepted by dimerint: edge weights,
lattice indices, points on the unit circle, tolerances, and the settings of
the run logger. Every public constructor and command-line argument is routed
through one of these checks before any computation starts.

Version: 1.0.0
"""

import numbers
import os
import pathlib

from typing import Collection, Iterable, Optional


class ParameterValidators:
    """
    A utility class providing static methods for parameter validation.

    Each method checks a single kind of parameter and raises TypeError when
    the type is wrong, or ValueError when the value falls outside the accepted
    range. Error messages are prefixed with the class name so that the origin
    of a rejected argument is obvious in command-line output.
    """

    @staticmethod
    def validate_string_parameter(param: str,
                                  param_name: str) -> None:
        """
        Validate if a given parameter is a non-empty string.

        Parameters
        ----------
        param: str
            The parameter to validate.

        param_name: str
            The name of the parameter.

        Raises
        ------
        TypeError
            If the provided parameter is not of type 'str'.

        ValueError
            If the provided string is empty or consists solely
            of whitespace.
        """

        if not isinstance(param, str):
            raise TypeError(
                f"ParameterValidators Error.\n"
                f"The provided {param_name} ({param}) should be of type 'str'. "
                f"Got '{type(param)}'.")

        if not param.strip():
            raise ValueError(
                f"ParameterValidators Error.\n"
                f"Provided {param_name} cannot be an empty string or consist of whitespace.")

    @staticmethod
    def validate_boolean_parameter(param: bool,
                                   param_name: str) -> None:
        """
        Validate if a given parameter is a boolean.
        """

        if not isinstance(param, bool):
            raise TypeError(
                f"ParameterValidators Error.\n"
                f"The provided {param_name} ({param}) should be of type 'bool'. "
                f"Got '{type(param)}'.")

    @staticmethod
    def validate_integer_parameter(param: int,
                                   param_name: str,
                                   min_val: Optional[int] = None,
                                   max_val: Optional[int] = None) -> None:
        """
        Validate if a given parameter is an integer within the specified range.

        Booleans are rejected even though they subclass int. Numpy integer
        scalars are accepted.

        Parameters
        ----------
        param: int
            The parameter to validate.

        param_name: str
            The name of the parameter.

        min_val: int, default=None
            The minimum acceptable value for the parameter.

        max_val: int, default=None
            The maximum acceptable value for the parameter.

        Raises
        ------
        TypeError
            If the provided parameter is not an integer.

        ValueError
            If the provided integer is outside [min_val, max_val].
        """

        if isinstance(param, bool) or not isinstance(param, numbers.Integral):
            raise TypeError(
                f"ParameterValidators Error.\n"
                f"The provided {param_name} ({param}) should be of type 'int'. "
                f"Got '{type(param)}'.")

        too_small = min_val is not None and param < min_val
        too_large = max_val is not None and param > max_val
        if too_small or too_large:
            raise ValueError(
                f"ParameterValidators Error.\n"
                f"The provided {param_name} should be between {min_val} and {max_val}. "
                f"Got {param}.")

    @staticmethod
    def validate_real_parameter(param: float,
                                param_name: str,
                                lower: Optional[float] = None,
                                upper: Optional[float] = None,
                                strict: bool = True) -> None:
        """
        Validate if a given parameter is a finite real number inside an
        interval.

        Parameters
        ----------
        param: float
            The parameter to validate.

        param_name: str
            The name of the parameter.

        lower: float, default=None
            Lower bound of the interval; unbounded when None.

        upper: float, default=None
            Upper bound of the interval; unbounded when None.

        strict: bool, default=True
            If True the bounds are excluded, otherwise they are included.

        Raises
        ------
        TypeError
            If the parameter is not a real number.

        ValueError
            If the parameter is not finite or lies outside the interval.
        """

        if isinstance(param, bool) or not isinstance(param, numbers.Real):
            raise TypeError(
                f"ParameterValidators Error.\n"
                f"The provided {param_name} ({param}) should be a real number. "
                f"Got '{type(param)}'.")

        value = float(param)
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(
                f"ParameterValidators Error.\n"
                f"The provided {param_name} must be finite. Got {param}.")

        if strict:
            below = lower is not None and value <= lower
            above = upper is not None and value >= upper
        else:
            below = lower is not None and value < lower
            above = upper is not None and value > upper

        if below or above:
            brackets = ("(", ")") if strict else ("[", "]")
            raise ValueError(
                f"ParameterValidators Error.\n"
                f"The provided {param_name} must lie in "
                f"{brackets[0]}{lower}, {upper}{brackets[1]}. Got {param}.")

    @staticmethod
    def validate_positive_real(param: float,
                               param_name: str) -> None:
        """
        Validate that a parameter is a finite, strictly positive real number.
        """

        ParameterValidators.validate_real_parameter(param=param,
                                                    param_name=param_name,
                                                    lower=0.0)

    @staticmethod
    def validate_nonzero_complex(param: complex,
                                 param_name: str) -> None:
        """
        Validate that a parameter is a nonzero finite complex number.
        """

        if isinstance(param, bool) or not isinstance(param, numbers.Complex):
            raise TypeError(
                f"ParameterValidators Error.\n"
                f"The provided {param_name} ({param}) should be a complex number. "
                f"Got '{type(param)}'.")

        if param == 0 or abs(param) == float("inf") or param != param:
            raise ValueError(
                f"ParameterValidators Error.\n"
                f"The provided {param_name} must be a nonzero finite number. "
                f"Got {param}.")

    @staticmethod
    def validate_unit_complex(param: complex,
                              param_name: str,
                              tol: float = 1e-12) -> None:
        """
        Validate that a complex parameter lies on the unit circle.

        Parameters
        ----------
        param: complex
            The parameter to validate.

        param_name: str
            The name of the parameter.

        tol: float, default=1e-12
            Accepted deviation of |param| from 1.
        """

        ParameterValidators.validate_nonzero_complex(param, param_name)

        if abs(abs(param) - 1.0) > tol:
            raise ValueError(
                f"ParameterValidators Error.\n"
                f"The provided {param_name} must have unit modulus. "
                f"Got |{param_name}| = {abs(param)}.")

    @staticmethod
    def validate_choice(param: str,
                        param_name: str,
                        choices: Iterable[str]) -> None:
        """
        Validate that a string parameter is one of the accepted choices.
        """

        ParameterValidators.validate_string_parameter(param, param_name)

        choices = list(choices)
        if param not in choices:
            raise ValueError(
                f"ParameterValidators Error.\n"
                f"Invalid {param_name}: {param}. "
                f"Must be one of: {', '.join(choices)}.")

    @staticmethod
    def validate_schedule(schedule: Iterable[int],
                          param_name: str = "schedule") -> None:
        """
        Validate that a schedule is a non-empty, strictly increasing sequence
        of positive integers.
        """

        values = list(schedule)
        if not values:
            raise ValueError(
                f"ParameterValidators Error.\n"
                f"The provided {param_name} cannot be empty.")

        for value in values:
            ParameterValidators.validate_integer_parameter(value, param_name, min_val=1)

        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError(
                f"ParameterValidators Error.\n"
                f"The provided {param_name} must be strictly increasing. Got {values}.")

    @staticmethod
    def validate_log_level(log_level: str,
                           valid_log_levels: Collection[str]) -> None:
        """
        Validate the provided log_level parameter.

        Parameters
        ----------
        log_level: str
            The log level to validate.

        valid_log_levels: Collection[str]
            The accepted log levels.

        Raises
        ------
        ValueError
            If the provided log_level is not among the accepted levels.
        """

        ParameterValidators.validate_string_parameter(param=log_level,
                                                      param_name="log_level")

        if log_level.upper().strip() not in valid_log_levels:
            raise ValueError(
                f"ParameterValidators Error.\n"
                f"Invalid log level: {log_level}. "
                f"Log level must be one of: {', '.join(sorted(valid_log_levels))}.")

    @staticmethod
    def validate_log_format(log_format: str,
                            valid_formats: Collection[str]) -> None:
        """
        Validate the provided log_format parameter.
        """

        ParameterValidators.validate_string_parameter(param=log_format,
                                                      param_name="log_format")

        if log_format not in valid_formats:
            raise ValueError(
                f"ParameterValidators Error.\n"
                f"Invalid log message format: {log_format}. "
                f"Format must be one of: {', '.join(sorted(valid_formats))}.")

    @staticmethod
    def validate_directory_is_writable(directory: pathlib.Path) -> None:
        """
        Validate that a directory exists and can be written to.

        Raises
        ------
        ValueError
            If the directory is not writable.
        """

        if not os.access(directory, os.W_OK):
            raise ValueError(
                f"ParameterValidators Error.\n"
                f"Directory path is not writable: {directory}. "
                f"Ensure you have the necessary permissions.")
