"""Exact cochain-level algebra on finite simplicial sets.

Modules: linalg (exact sparse linear algebra), simplicial (EZ-presented
simplicial sets, cochains), operads (Com, I, Barratt-Eccles type R_B),
cochains / acyclic (cup-i products, Steenrod squares, acyclic-model lifts),
forms (polynomial differential forms), spectral (filtered complexes and the
Serre spectral sequence), sullivan (free CDGA extensions), cli.
"""
__version__ = "0.1.0"
