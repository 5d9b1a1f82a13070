"""Tests for poolal."""
