"""Fully connected quantum Boltzmann machine on a variable-coefficient QAOA
circuit: gate-level simulator, exact Ising oracles, classical baseline,
bilevel trainer, and the experiment harness."""

from ._backend import COMPILED, backend_name

__version__ = "0.1.0"

__all__ = ["COMPILED", "backend_name", "__version__"]
