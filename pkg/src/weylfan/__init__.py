"""weylfan: exact root systems, Weyl polytopes, normal fans, and homology
of the simplicial models of the associated toric identification spaces."""

__version__ = "0.1.0"
