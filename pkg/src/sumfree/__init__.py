"""Constructions and checks for k-colored sum-free sets in Z_m^n."""

from sumfree.compositions import SymmetricTensor, enumerate_compositions, marginal, maxent_with_marginals
from sumfree.construction import ConstructOptions, SumFreeCollection, choose_prime, construct
from sumfree.decomposition import SimpleCombination, is_tame, symmetric_marginal_tensor, tame_decompose
from sumfree.distributions import Params, ScaledDistribution, capacity, entropy, gamma_root, nu
from sumfree.kernels import BACKEND
from sumfree.rounding import round_tau
from sumfree.verification import verify_sumfree

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConstructOptions",
    "Params",
    "ScaledDistribution",
    "SimpleCombination",
    "SumFreeCollection",
    "SymmetricTensor",
    "capacity",
    "choose_prime",
    "construct",
    "entropy",
    "enumerate_compositions",
    "gamma_root",
    "is_tame",
    "marginal",
    "maxent_with_marginals",
    "nu",
    "round_tau",
    "symmetric_marginal_tensor",
    "tame_decompose",
    "verify_sumfree",
]
