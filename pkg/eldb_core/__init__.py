"""Exact computation core for efficient k-limited broadcast domination."""
