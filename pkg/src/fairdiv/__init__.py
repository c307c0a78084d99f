"""Fair division engine: cakes, multi-cakes and shift covers.

Divisions live on exact-rational simplices and products of simplices;
allocations are certified through hypergraph fractional matchings and
covers computed with exact rational linear programming.
"""

__version__ = "0.1.0"
