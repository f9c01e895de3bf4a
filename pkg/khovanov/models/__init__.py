"""Pydantic schemas for tables, reports and jobs."""
