"""Exact circular flow numbers of cubic graphs via 2-bisections."""
