"""foldreg: a calculus for regular and polyregular string functions.

Graded list types and their values, a typed combinator calculus with the
safe fold rule, relational encodings, quantifier-free interpretations with
a streaming fold engine over finite theory monoids, streaming string
transducers, and the tree extension.
"""

__version__ = "0.1.0"
