"""Quasi-static planar pushing and press-and-slide toolkit.

Limit-surface mechanics, reduced-order contact-mode models with closed-form
force allocators, a deterministic SE(2) simulator, and the controllers that
close the loop around it.
"""

__version__ = "0.1.0"
