"""Structured logging and optional Logfire forwarding."""
