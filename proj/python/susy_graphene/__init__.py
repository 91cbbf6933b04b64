"""Darboux chains of the oscillator and Morse wells and the graphene observables built on them."""

try:
    from ._susy_graphene import *  # noqa: F401,F403
    from ._susy_graphene import __doc__  # noqa: F401
except ImportError:  # in-tree build: the extension sits next to, not inside, the package
    from _susy_graphene import *  # noqa: F401,F403

__version__ = "0.1.0"
