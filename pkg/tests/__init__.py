"""Tests for dp-cover."""
