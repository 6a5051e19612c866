#!/usr/bin/env python
# -*- coding: utf-8 -*-

from typing import Optional


class ConflictingArgumentsError(Exception):
    """
    This exception is returned when 2 arguments to the same function are in conflict.
    """


class InvalidCircuitSpecError(ValueError):
    """
    Raised when a circuit description cannot describe a brickwall hybrid circuit
    (odd L, p outside [0, 1], reference site out of range, bad sub-circuit width).
    """


class InvalidSiteError(IndexError):
    """
    Raised when qubit indices handed to a tableau operation are out of range,
    duplicated, or empty.
    """


class CircuitNotDecodableError(Exception):
    """
    The reference qubit of the circuit is never purified within the circuit depth,
    so its label is not a function of the measurement record.
    """

    def __init__(self, fingerprint: str, depth: int):
        super().__init__()
        self.fingerprint = fingerprint
        self.depth = depth

    def __str__(self) -> str:
        return (
            f"Circuit {self.fingerprint} not decodable at depth T={self.depth}: "
            f"the reference qubit never purifies."
        )


class WindowTooSmallError(ValueError):
    """
    Raised when a crop window hides data that an operation needs, either key
    measurements for exact prediction or pixels for the network kernel chain.
    """


class UnsupportedFileFormatError(Exception):
    """
    This exception is intended to communicate that the file header does not match
    the format (magic bytes or version) the reader expects.
    """

    def __init__(self, reader_name: str, path: str, msg_extra: Optional[str] = None):
        super().__init__()
        self.reader_name = reader_name
        self.path = path
        self.msg_extra = msg_extra

    def __str__(self) -> str:
        msg = f"{self.reader_name} does not support the file: '{self.path}'."

        if self.msg_extra is not None:
            msg = f"{msg} {self.msg_extra}"

        return msg


class CorruptFileError(Exception):
    """
    Raised when a file has a valid header but fewer bytes than the header implies.
    """


class UnexpectedShapeError(Exception):
    """
    A general exception that can be thrown when handling shape validation.
    Should be provided with a message for the user to be given more context.
    """


class TrainingDivergedError(ArithmeticError):
    """
    Raised when the training loss becomes NaN or infinite.
    """


class InsufficientCircuitsError(Exception):
    """
    Postselection could not find enough circuits with the requested purification
    time before exhausting its generation budget.
    """


class TableauInvariantError(AssertionError):
    """
    Internal consistency failure of a stabilizer tableau or of the symbolic sign
    tracking. Indicates a bug, never bad user input.
    """
