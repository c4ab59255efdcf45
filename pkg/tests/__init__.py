"""Tests for thz-bgsr."""
