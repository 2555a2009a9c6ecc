"""Exact simulation of LOCC protocols that discriminate orthogonal product states
with the help of a shared maximally entangled state."""

from .engine import Leaf, Node, Outcome, Protocol, simulate, verify_perfect
from .families import FAMILIES, StateSet, build
from .linalg import Ket, LocalOperator, SystemLayout, basis_ket, inner, schmidt_rank_across, tensor
from .protocols import THEOREMS, build_protocol, states_for

__all__ = [
    "FAMILIES", "THEOREMS", "Ket", "Leaf", "LocalOperator", "Node", "Outcome", "Protocol",
    "StateSet", "SystemLayout", "basis_ket", "build", "build_protocol", "inner",
    "schmidt_rank_across", "simulate", "states_for", "tensor", "verify_perfect",
]
