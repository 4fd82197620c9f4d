"""Finite sites, arches, sheafification and the localic dualities, made executable."""

from .fincat import CategoryError, FiniteCategory, Functor
from .site import FGSite, PrincipalSite, Sieve
from .duality import FinPoset, JoinSemilattice
from .formats import InputError, LawError, SchemaError, emit, parse

__all__ = [
    "CategoryError", "FiniteCategory", "Functor", "FGSite", "PrincipalSite", "Sieve",
    "FinPoset", "JoinSemilattice", "InputError", "LawError", "SchemaError", "emit", "parse",
]
