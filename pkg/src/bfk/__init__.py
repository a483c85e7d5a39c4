"""Khovanov-Seidel and bordered Floer braid bimodules over F_2, with the filtration
whose associated graded recovers the Khovanov-Seidel side."""

from __future__ import annotations

__version__ = "0.1.0"
