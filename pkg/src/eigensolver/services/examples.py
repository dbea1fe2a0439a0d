"""Fixed systems with known solutions, used by tests, the CLI and the bench."""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..core.poly import Polynomial, PolySystem, Support
from .admissible import AdmissibleTuple, TupleFamily


@dataclass(frozen=True)
class ExampleCase:
    name: str
    system: PolySystem
    family: TupleFamily
    solutions: List[Tuple[complex, ...]]
    d_size: Optional[int] = None
    tuple: Optional[AdmissibleTuple] = None
    extras: Dict[str, Any] = field(default_factory=dict)


def _poly(terms: Dict[Tuple[int, ...], complex], dim: int) -> Polynomial:
    return Polynomial(terms, dim)


def running_example() -> ExampleCase:
    """Three polynomials in x, y with the single root (−1, 1) and a hand-built tuple."""
    f1 = _poly({(0, 0): -1, (1, 0): 2, (0, 1): 2, (0, 2): 1}, 2)
    f2 = _poly({(0, 0): -1, (1, 0): 1, (2, 0): 1, (0, 1): 1}, 2)
    f3 = _poly({(0, 0): -1, (1, 0): 2, (2, 0): 2, (0, 1): 1}, 2)
    A0 = Support.of([(0, 0), (1, 0), (0, 1)])
    tup = AdmissibleTuple(
        A0=A0,
        E=(
            A0,
            Support.of([(0, 0), (1, 0)]),
            Support.of([(0, 0), (0, 1)]),
            Support.of([(0, 0), (0, 1)]),
        ),
        D=Support.of([(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1), (0, 2), (1, 2)]),
        family=TupleFamily.CUSTOM,
    )
    extras = {
        # rows indexed by D in lex order: 1, y, y², x, xy, xy², x², x²y
        "cokernel": np.array([
            [1, 1, 1, -1, -1, -1, 1, 1],
            [0, 0, 0, 0, -1, 2, 0, 1],
        ], dtype=complex),
        "f0": _poly({(0, 0): 1, (1, 0): 3, (0, 1): 1}, 2),
        "g": _poly({(0, 0): -1, (1, 0): 3, (0, 1): 2}, 2),
        "h": _poly({(0, 0): 1, (1, 0): 1, (0, 1): 1}, 2),
        "basis": [(0, 0), (1, 0)],
        "basis_alt": [(1, 0), (0, 1)],
        "hilbert": 2,
    }
    return ExampleCase(
        name="running",
        system=PolySystem((f1, f2, f3)),
        family=TupleFamily.CUSTOM,
        solutions=[(-1.0, 1.0)],
        d_size=8,
        tuple=tup,
        extras=extras,
    )


def molecular_example() -> ExampleCase:
    """Square mixed system in three variables from molecular biology; all 16 roots are real."""
    b = [-13, -1, -1, 24, -1]

    def cyclic(i: int, j: int) -> Polynomial:
        def e(pi: int, pj: int) -> Tuple[int, ...]:
            exp = [0, 0, 0]
            exp[i] += pi
            exp[j] += pj
            return tuple(exp)

        monomials = [e(0, 0), e(2, 0), e(0, 2), e(1, 1), e(2, 2)]
        return _poly(dict(zip(monomials, b)), 3)

    return ExampleCase(
        name="molecular",
        system=PolySystem((cyclic(1, 2), cyclic(2, 0), cyclic(0, 1))),
        family=TupleFamily.MIXED,
        solutions=[],
        d_size=200,
        extras={"root_count": 16},
    )


def fixed_examples() -> Dict[str, ExampleCase]:
    """Named map of the fixed example systems."""
    return {case.name: case for case in (running_example(), molecular_example())}
