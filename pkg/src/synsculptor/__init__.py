"""Postural-synergy extraction and motion synthesis for floating-base humanoids."""

__version__ = "0.1.0"
