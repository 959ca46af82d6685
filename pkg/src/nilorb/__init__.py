"""Exact-arithmetic toolkit for nilpotent orbits of reductive Lie
algebras over good characteristic: root data and invariant norms,
Chevalley-basis Lie algebras, instability optimization on the
cocharacter lattice, orbit enumeration, finite-field orbit counting,
and local quaternionic orbit censuses."""

__version__ = "0.1.0"
