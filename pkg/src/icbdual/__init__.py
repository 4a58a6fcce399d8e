"""Exact computations for the two-parameter type-B Hecke algebra, its L-bases,
coideal subalgebras acting on tensor powers of the natural sl_k module, and
the comparison of iota/jmath-canonical bases with L-bases."""

__version__ = "0.1.0"
