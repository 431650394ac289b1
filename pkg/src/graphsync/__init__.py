"""Synchrony and anti-synchrony subspaces of difference-coupled graph networks."""
