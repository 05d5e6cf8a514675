"""Finite levels of allosteric actions of surface groups.

Thin wrappers over the compiled ``_allostery`` module: rationals come back
as :class:`fractions.Fraction`, degrees as ``int`` and certificates as
dictionaries. Words are strings such as ``"a1 b1^-1"``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import _allostery as _core
from ._allostery import (
    Chain,
    ConstructionExhausted,
    DomainError,
    Error,
    ForeignGenerators,
    IoError,
    ParseError,
    PointedAction,
    Presentation,
    PresentationMismatch,
    RelatorFailure,
    cyclic_cover,
    gamma_a_words,
    load_action,
    load_chain,
    product_intersection,
    save_action,
    trivial_action,
    verify_embedding,
)

__all__ = [
    "Chain",
    "ConstructionExhausted",
    "DomainError",
    "Error",
    "ForeignGenerators",
    "IoError",
    "ParseError",
    "PointedAction",
    "Presentation",
    "PresentationMismatch",
    "RateStep",
    "RelatorFailure",
    "build_chain",
    "build_lambda",
    "choose_rates",
    "chain_degree",
    "compare_chains",
    "cyclic_cover",
    "cylinder_measure",
    "dehn_reduce",
    "fix_proportion",
    "gamma_a_words",
    "induced_gamma_a_measure",
    "is_trivial",
    "load_action",
    "load_chain",
    "product_intersection",
    "run_cli",
    "save_action",
    "trivial_action",
    "urs_certificate",
    "verify_embedding",
]


def _q(text: str) -> Fraction:
    return Fraction(text)


def _rational_text(value) -> str:
    q = Fraction(value)
    return f"{q.numerator}/{q.denominator}"


class RateStep(tuple):
    """(prime, exponent, rate, partial) with Fraction rates."""

    __slots__ = ()

    def __new__(cls, prime: int, exponent: int, rate: Fraction, partial: Fraction):
        return super().__new__(cls, (prime, exponent, rate, partial))

    prime = property(lambda self: self[0])
    exponent = property(lambda self: self[1])
    rate = property(lambda self: self[2])
    partial = property(lambda self: self[3])


def choose_rates(t, primes: Sequence[int], depth: int) -> list[RateStep]:
    return [
        RateStep(p, e, _q(r), _q(s))
        for p, e, r, s in _core.choose_rates(_rational_text(t), list(primes), depth)
    ]


def dehn_reduce(pres: Presentation, word: str) -> tuple[bool, str]:
    return _core.dehn_reduce(pres, word)


def is_trivial(pres: Presentation, word: str) -> bool:
    return _core.dehn_reduce(pres, word)[0]


def build_lambda(pres: Presentation, p: int, r, gamma: str, delta: str, seed: int = 7):
    """Returns (action, certificate dict, certificate verified)."""
    action, cert, ok = _core.build_lambda(pres, p, _rational_text(r), gamma, delta, seed)
    return action, json.loads(cert), ok


def build_chain(
    pres: Presentation,
    t,
    primes: Sequence[int],
    depth: int,
    seed: int = 7,
    materialize_cap: int = 1_000_000,
) -> Chain:
    return _core.build_chain(pres, _rational_text(t), list(primes), depth, seed, materialize_cap)


def chain_degree(chain: Chain, level: int) -> int:
    return int(chain.degree(level))


def fix_proportion(chain: Chain, word: str, level: int) -> Fraction:
    return _q(_core.fix_proportion(chain, word, level))


def cylinder_measure(
    chain: Chain, fixed: Iterable[str], moved: Iterable[str] = (), level: int = 0
) -> Fraction:
    return _q(_core.cylinder_measure(chain, list(fixed), list(moved), level))


def urs_certificate(chain: Chain, length: int, max_level: Optional[int] = None) -> dict:
    if max_level is None:
        max_level = chain.depth
    return json.loads(_core.urs_certificate(chain, length, max_level))


def compare_chains(chain_s: Chain, chain_t: Chain, level: int) -> dict:
    report = json.loads(_core.compare_chains(chain_s, chain_t, level))
    for key, value in report.items():
        if isinstance(value, str) and key != "level":
            report[key] = _q(value)
    return report


def induced_gamma_a_measure(chain: Chain, genus_prime: int, level: int) -> dict:
    value, t_n, c_n, direct = _core.induced_gamma_a_measure(chain, genus_prime, level)
    return {
        "value": _q(value),
        "t_n": _q(t_n),
        "c_n": _q(c_n),
        "direct": None if direct is None else _q(direct),
    }


def run_cli(args: Sequence[str]) -> tuple[int, str, str]:
    return _core.run_cli([str(a) for a in args])
