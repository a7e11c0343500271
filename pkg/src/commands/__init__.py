"""Subcommands of the noun2verb command line, one module each."""

from src.commands import changepoint, comprehend, evaluate, harvest, produce, report, train

COMMAND_MODULES = (harvest, train, evaluate, comprehend, produce, changepoint, report)

__all__ = ["COMMAND_MODULES"]
