"""llv-lab: exact-arithmetic engine for LLV Lie algebras of graded
Frobenius algebras, Markman decompositions, Weil operators and finiteness
certificates."""

__version__ = "0.1.0"
