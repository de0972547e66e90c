"""Random free-fermion ensemble toolkit: exact diagonalization, eigenstate and
thermal correlation matrices, entanglement entropies, and random Fock-sector
comparisons, with Monte Carlo reporting."""

try:
    from ._ethf import *  # noqa: F401,F403  (installed wheel layout)
except ImportError:
    from _ethf import *  # noqa: F401,F403  (in-tree build: module on sys.path)

__all__ = [name for name in dir() if not name.startswith("_")]
