"""Exact moment-graph calculus.

Moment graphs on a lattice, their structure algebras, twisted pullbacks,
push-forwards along regular fibrations, truncated Chern characters and
Todd genera, with a Riemann-Roch verifier and Weyl-group instantiations.
"""

__version__ = "0.1.0"
