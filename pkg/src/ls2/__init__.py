"""A proof language for second-order intuitionistic linear logic with sums
and scalar products on proof-terms, plus its vector/matrix encodings."""

__version__ = "0.1.0"
