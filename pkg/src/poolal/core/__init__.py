"""Core domain models, contracts and utilities."""
