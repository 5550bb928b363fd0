"""Toolkit for simplifying CVE descriptions into plain language and
evaluating the results with automatic metrics and human review rounds."""

__version__ = "0.1.0"
