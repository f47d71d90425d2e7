"""Deontological checks of action plans over finite scenarios."""

from ._deon import ParseError, Scenario, brute_force, check, parse, solve

__all__ = ["ParseError", "Scenario", "brute_force", "check", "parse", "solve"]
