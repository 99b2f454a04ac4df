"""Offline plotting of qpc CSV exports."""

from .render import CsvFormatError, PlotJob, render

__version__ = "0.1.0"
