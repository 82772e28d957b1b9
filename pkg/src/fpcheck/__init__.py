"""Finitely presented groups and handle counts: words, Tietze moves, coset
enumeration, Smith normal form and small permutation groups, with a registry
that checks the combinatorial content of a Mazur-type construction."""

__version__ = "0.1.0"

from .words import Presentation, free_reduce, invert, cyclic_reduce, substitute, exponent_sum  # noqa: E402
from .coset import enumerate_cosets, order, permutation_rep  # noqa: E402
from .abelian import abelian_invariants, is_perfect, smith_normal_form, euler_characteristic  # noqa: E402
from .permgrp import Permutation, closure, find_epimorphism  # noqa: E402
from .tietze import DerivationStep, DerivationScript, replay_derivation, greedy_simplify  # noqa: E402
