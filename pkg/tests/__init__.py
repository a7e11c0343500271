"""Test suite for noun2verb."""
