"""Hadamard triples (p, D, L): companion sets and unitarity checks.

A triple is Hadamard when the N x N matrix (1/sqrt(N)) [exp(-2 pi i d l / p)]
over d in D, l in L is unitary; equivalently L is a spectrum of the uniform
measure on D/p.  ``construct_L`` builds a canonical companion set for each
admissible class, ``unitarity_residual`` measures the numeric deviation from
unitarity, and ``is_hadamard`` decides the property exactly through rational
membership in the mask's zero set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .core import DigitSet, LevelClass, classify_level


def _as_digit_set(p: int, digits: DigitSet | Iterable[int]) -> DigitSet:
    return digits if isinstance(digits, DigitSet) else classify_level(p, digits)


def construct_L(p: int, digits: DigitSet | Iterable[int]) -> tuple[int, ...]:
    """Canonical companion set making (p, D, L) a Hadamard triple.

    T1 (D = {0..N-1}, N | p):  L = (p/N) {0, 1, ..., N-1}.
    T2 (D = {0,a,b}, 3 | p):   L = (p/3) {0, 1, -1}.
    T3 (D = {0,d}):            with g = gcd(d,p), p = 2mg and d = g d'',
                               L = {0, l} where l = m (d'')^{-1} mod 2m,
                               taken as the least positive representative.
    """
    ds = _as_digit_set(p, digits)
    cls = ds.cls
    if cls is LevelClass.T1:
        step = p // ds.N
        return tuple(step * k for k in range(ds.N))
    if cls is LevelClass.T2:
        step = p // 3
        return (0, step, -step)
    if cls is LevelClass.T3:
        g = math.gcd(ds.d, p)
        two_m = p // g
        # p/gcd(d,p) even is the T3 condition, so two_m = 2m with m >= 1
        m = two_m // 2
        d2 = ds.d // g  # coprime to 2m by construction
        ell = (m * pow(d2, -1, two_m)) % two_m
        return (0, ell)
    raise ValueError(f"not admissible: {ds.violations}")


def unitarity_residual(
    p: int, digits: DigitSet | Iterable[int], L: Iterable[int]
) -> float:
    """Max-norm of H*H - I for H = (1/sqrt(N)) [exp(-2 pi i d l / p)]."""
    ds = digits.digits if isinstance(digits, DigitSet) else tuple(digits)
    Ls = tuple(L)
    if len(Ls) != len(ds):
        raise ValueError(f"cardinality mismatch: #D = {len(ds)}, #L = {len(Ls)}")
    n = len(ds)
    H = np.exp(-2j * np.pi * np.outer(ds, Ls) / p) / math.sqrt(n)
    return float(np.max(np.abs(H.conj().T @ H - np.eye(n))))


def is_hadamard(p: int, digits: DigitSet | Iterable[int], L: Iterable[int]) -> bool:
    """Exact Hadamard-triple test via the mask zero set.

    True iff every difference of distinct elements of L, scaled by 1/p, lies
    in the zero set of the mask of D: for T3 that set is (2Z+1)/(2d), for T2
    it is (3Z + {1,2})/3, for T1 it is (Z \\ NZ)/N.  Decided with exact
    rational arithmetic; agrees with ``unitarity_residual`` being tiny.
    """
    ds = _as_digit_set(p, digits)
    Ls = tuple(L)
    if len(Ls) != ds.N:
        raise ValueError(f"cardinality mismatch: #D = {ds.N}, #L = {len(Ls)}")
    cls = ds.cls
    if cls is LevelClass.INVALID:
        raise ValueError(f"not admissible: {ds.violations}")
    for i in range(len(Ls)):
        for j in range(i + 1, len(Ls)):
            diff = Ls[i] - Ls[j]
            if cls is LevelClass.T3:
                t = Fraction(2 * ds.d * diff, p)
                ok = t.denominator == 1 and t.numerator % 2 != 0
            elif cls is LevelClass.T2:
                t = Fraction(3 * diff, p)
                ok = t.denominator == 1 and t.numerator % 3 != 0
            else:
                t = Fraction(ds.N * diff, p)
                ok = t.denominator == 1 and t.numerator % ds.N != 0
            if not ok:
                return False
    return True


@dataclass(frozen=True)
class HadamardTriple:
    p: int
    digits: DigitSet
    L: tuple[int, ...]
    residual: float


def hadamard_triple(p: int, digits: DigitSet | Iterable[int]) -> HadamardTriple:
    """Construct the canonical triple and record its unitarity residual."""
    ds = _as_digit_set(p, digits)
    L = construct_L(p, ds)
    return HadamardTriple(p, ds, L, unitarity_residual(p, ds, L))
