"""Chromatic numbers of abelian Cayley graphs given by Heuberger matrices."""
from .classify import CirculantSpec, Verdict, classify
from .intmat import HeubergerMatrix, parse_matrix

__all__ = ["CirculantSpec", "HeubergerMatrix", "Verdict", "classify", "parse_matrix"]
