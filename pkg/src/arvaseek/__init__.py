"""Extremum-seeking ARVA search: field model, reference generator, quadrotor control."""

__version__ = "0.1.0"
