"""Spectral analysis of the linearized similarity flow."""
