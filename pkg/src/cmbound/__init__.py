"""Residue-density lower bounds for elliptic curves over CM fields, with finite checks.

Modules: ``ffield`` (F_{p^f}), ``ffcurves`` (reduction types), ``numfield``
(splitting of 5), ``bounds``, ``density``, ``gimage`` (mod-5 images) and ``cli``.
"""

__version__ = "0.1.0"
