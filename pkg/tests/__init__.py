"""Tests for angleforge."""
