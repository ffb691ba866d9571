"""Exact computational engine for regular actions on the big cell,
category O block combinatorics, Whittaker realizations of big projective
modules, matrix-element subalgebras of the enveloping-algebra dual, and
small quantum group blocks at odd roots of unity.

All arithmetic is exact (rationals, or cyclotomic rationals for the root
of unity case); there is no floating point anywhere in the package.
"""

__version__ = "0.1.0"
