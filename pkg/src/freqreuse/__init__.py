"""Reliability and ubiquitous-rate analysis of BS- and user-specific frequency reuse."""

__version__ = "0.1.0"
