"""Tests for fluxlab."""
