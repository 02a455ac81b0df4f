"""Exact computations with the Hopf algebras S_k of O-forms of G_m and their comodules."""

from .scalars import BackendConfig, ValuedField, make_field, padic, char0, finite

__all__ = ["BackendConfig", "ValuedField", "make_field", "padic", "char0", "finite"]
__version__ = "0.1.0"
