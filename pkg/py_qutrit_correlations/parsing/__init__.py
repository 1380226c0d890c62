"""Readers and writers for count matrices, profiles, reports and configs."""
