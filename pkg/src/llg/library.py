"""Built-in examples: frames of small Lie groups, structure constants and gauge jets."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .deformation import GaugeJet
from .lie_algebra import StructureConstants
from .parallelism import Frame, connection_from_frame, localize, torsion


@dataclass(frozen=True)
class ExampleEntry:
    name: str
    kind: str  # "frame" | "constants" | "jet"
    n: int
    frame: Frame | None = None
    constants: StructureConstants | None = None
    jet: GaugeJet | None = None
    base: str | None = None  # for jets: the frame example they act on
    point: tuple = ()
    description: str = ""

    def base_point(self):
        return list(self.point) if self.point else [Fraction(0)] * self.n

    def structure_constants(self, point=None) -> StructureConstants:
        if self.constants is not None and point is None:
            return self.constants
        if self.frame is None:
            raise ValueError(f"{self.name} carries no frame")
        p = self.base_point() if point is None else point
        return localize(torsion(connection_from_frame(self.frame)), p)


def _frame(rows, inverse=None) -> Frame:
    return Frame.from_strings(rows, inverse)


def abelian_frame(n: int) -> Frame:
    return Frame.identity(n)


HEISENBERG_ROWS = [["1", "0", "0"], ["0", "1", "0"], ["0", "x1", "1"]]
ENGEL_ROWS = [["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "x1", "1", "0"], ["0", "1/2*x1^2", "x1", "1"]]
AFF1_ROWS = [["1", "0"], ["-x2", "1"]]
# left-invariant fields of SL(2) in the chart g = U(x1) L(x2) U(x3), columns (H, E, F)
SL2_ROWS = [
    ["x2^-1", "0", "x2^-1*x3"],
    ["x2", "0", "x2*x3 + 1"],
    ["-2*x3 - x2^-1", "1", "-x3^2 - x2^-1*x3"],
]
SL2_INVERSE = [
    ["x2^2*x3 + x2", "-x3", "0"],
    ["x2^2*x3^2 + 2*x2*x3 + 1", "-x3^2", "1"],
    ["-x2^2", "1", "0"],
]
PERTURBED_ROWS = [["1", "0", "0"], ["0", "1", "0"], ["0", "x1*x2", "1"]]

SL2_CONSTANTS = [(2, 1, 2, 2), (3, 1, 3, -2), (1, 2, 3, 1)]


def _zero(n):
    return [["0"] * n for _ in range(n)]


def _build() -> dict:
    out = {}

    def add(entry: ExampleEntry):
        out[entry.name] = entry

    for n in (2, 3, 4):
        add(ExampleEntry(f"abelian-{n}", "frame", n, frame=abelian_frame(n),
                         description=f"translations of R^{n}"))
    add(ExampleEntry("heisenberg-3", "frame", 3, frame=_frame(HEISENBERG_ROWS),
                     description="Heisenberg group, e2 = d2 + x1 d3"))
    add(ExampleEntry("engel-4", "frame", 4, frame=_frame(ENGEL_ROWS),
                     description="filiform 4-dimensional nilpotent group"))
    add(ExampleEntry("aff1-2", "frame", 2, frame=_frame(AFF1_ROWS),
                     constants=StructureConstants.from_upper(2, [(2, 1, 2, 1)]),
                     description="affine group of the line, [e1, e2] = e2"))
    add(ExampleEntry("sl2-3", "frame", 3, frame=_frame(SL2_ROWS, SL2_INVERSE),
                     constants=StructureConstants.from_upper(3, SL2_CONSTANTS),
                     point=(Fraction(0), Fraction(1), Fraction(0)),
                     description="SL(2) near the identity; chart has Laurent terms in x2"))
    add(ExampleEntry("perturbed-3", "frame", 3, frame=_frame(PERTURBED_ROWS),
                     description="parallelism that is not a local Lie group"))

    add(ExampleEntry("abelian-const-jet", "jet", 2,
                     jet=GaugeJet.from_strings(2, [[["1", "2"], ["3", "4"]]]).truncated(1),
                     base="abelian-2", description="f = I + tA with constant A"))
    add(ExampleEntry("abelian-nonconst-jet", "jet", 2,
                     jet=GaugeJet.from_strings(2, [[["0", "x1"], ["0", "0"]]]),
                     base="abelian-2", description="f = I + tB with B^1_2 = x1"))
    add(ExampleEntry("heisenberg-bad-jet", "jet", 3,
                     jet=GaugeJet.from_strings(3, [[["0", "0", "1"], ["0", "0", "0"], ["0", "0", "0"]]]),
                     base="heisenberg-3", description="velocity with a nonzero third column"))
    add(ExampleEntry("heisenberg-good-jet", "jet", 3,
                     jet=GaugeJet.from_strings(3, [[["1", "0", "0"], ["0", "1", "0"], ["0", "0", "0"]]]),
                     base="heisenberg-3", description="velocity off the third column"))
    for n, base in ((2, "abelian-2"), (3, "heisenberg-3")):
        add(ExampleEntry(f"identity-jet-{n}", "jet", n, jet=GaugeJet.identity(n, 2), base=base,
                         description="the constant curve f = I"))
    return out


_EXAMPLES: dict | None = None


def examples() -> dict:
    global _EXAMPLES
    if _EXAMPLES is None:
        _EXAMPLES = _build()
    return _EXAMPLES


def get(name: str) -> ExampleEntry:
    ex = examples()
    if name in ex:
        return ex[name]
    if name.startswith("abelian-") and name[8:].isdigit():
        n = int(name[8:])
        if n >= 2:
            return ExampleEntry(name, "frame", n, frame=abelian_frame(n))
    raise KeyError(f"unknown example {name!r}; known: {', '.join(sorted(ex))}")
