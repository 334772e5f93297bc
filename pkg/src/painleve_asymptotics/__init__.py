"""Rational solutions of Painleve-II, their exact Backlund ladder, and the
large-degree edge and corner asymptotics, with tools to compare the two."""

__version__ = "0.1.0"
