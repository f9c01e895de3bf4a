"""Homology pipeline, verification suites and corpus management."""
