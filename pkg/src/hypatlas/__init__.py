"""Hyperbolic polynomials: roots, sign patterns, moduli orders and strata."""
