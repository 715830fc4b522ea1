"""
The four flop cases: homogeneous data, bundle dictionaries, collections,
replay scripts and lemma suites.

C2 and AG4 are read from TOML files in ``flopverify/data/cases``; Mukai(n)
and Std(n) are generated from n.
"""

import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Any

from flopverify.domain.bbw_engine import (
    Bundle,
    Certificate,
    HomogeneousSpace,
    cohomology,
    levi_dual,
    pullback,
    pushforward,
)
from flopverify.domain.character_ring import (
    levi_determinant,
    levi_rank,
    weyl_dimension,
)
from flopverify.domain.descriptors import Descriptor
from flopverify.domain.weight_lattice import RootSystem, Weight
from flopverify.domain.zero_section_hom import (
    FObject,
    TotalSpace,
    Verdict,
    hom_V,
    is_orthogonal,
)

CASES_DIR = Path(__file__).resolve().parent.parent / "data" / "cases"
CASE_FILES = {"C2": "c2.toml", "AG4": "ag4.toml"}
PARAMETRIC_CASES = {"Mukai": 2, "Std": 1}
DEFAULT_LEMMA_WINDOW = 6
DEFAULT_MAX_N = 8

_CASE_NAME = re.compile(r"^(?P<family>[A-Za-z]+\d*)(?:\((?P<n>\d+)\))?$")


class CaseDataError(RuntimeError):
    """Shipped or generated case data failed its consistency checks."""


class AssertionKind(Enum):
    HOM = "hom"
    ORTHOGONAL = "orthogonal"
    ACYCLIC = "acyclic"
    COHOMOLOGY = "cohomology"
    PUSHFORWARD = "pushforward"


@dataclass(frozen=True)
class NamedBundle:
    """Irreducible homogeneous bundle on P or Q, by its Levi highest weight."""

    name: str
    side: str
    weight: Weight

    def __post_init__(self):
        if self.side not in ("P", "Q"):
            raise ValueError(f"Bundle {self.name} must live on P or Q, got {self.side}")


@dataclass(frozen=True)
class LemmaAssertion:
    """
    One independently checkable claim of a lemma group.

    ``expected`` holds (degree, dimension) pairs; for PUSHFORWARD assertions
    ``target`` is the side ("P" or "Q") and ``expected_weight`` a descriptor on it.
    """

    group: str
    label: str
    kind: AssertionKind
    source: str
    target: str | None = None
    expected: tuple[tuple[int, int], ...] = ()
    expected_rep: str | None = None
    expected_weight: str | None = None
    mutual: bool = False


@dataclass(frozen=True)
class AssertionResult:
    group: str
    label: str
    passed: bool
    certificate: str
    computed: str
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "group": self.group,
            "label": self.label,
            "passed": self.passed,
            "certificate": self.certificate,
            "computed": self.computed,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class StructureCheck:
    label: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class PushforwardSpec:
    along: str
    line: tuple[int, int]
    weight: Weight
    degree: int
    rank: int
    det: tuple[int, int]
    equals: str | None = None


@dataclass
class Move:
    """Elementary move of a replay script sentence."""

    kind: str
    count: int = 0
    window: str | None = None
    steps: int = 0
    becomes: str | None = None
    obj: str | None = None
    past: str | None = None
    left: str | None = None
    right: str | None = None
    result: str | None = None
    hom: tuple[tuple[int, int], ...] | None = None
    order: tuple[str, ...] = ()

    KINDS = (
        "rotate_far_right",
        "rotate_far_left",
        "window_right",
        "window_left",
        "swap",
        "left_mutate",
        "right_mutate",
        "reorder",
    )

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"Unknown move kind: {self.kind}")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Move":
        values = dict(data)
        if "object" in values:
            values["obj"] = values.pop("object")
        if "hom" in values:
            values["hom"] = tuple((int(d), int(n)) for d, n in values["hom"])
        if "order" in values:
            values["order"] = tuple(values["order"])
        return cls(**values)


@dataclass(frozen=True)
class Sentence:
    reference: str
    moves: tuple[Move, ...]


@dataclass(frozen=True)
class TargetBlock:
    label: str
    objects: tuple[str, ...]


@dataclass
class FlopCase:
    """All data of one flop: spaces, bundles, collections, script and lemmas."""

    name: str
    rs: RootSystem
    p_crossed: tuple[int, ...]
    q_crossed: tuple[int, ...]
    h: Weight
    H: Weight
    standard_weight: Weight
    standard_dim: int
    canonical: dict[str, tuple[int, int]]
    bundles: dict[str, NamedBundle] = field(default_factory=dict)
    pushforwards: tuple[PushforwardSpec, ...] = ()
    identities: tuple[tuple[str, str], ...] = ()
    sequences: tuple[tuple[str, str, str], ...] = ()
    initial: tuple[str, ...] = ()
    target: tuple[TargetBlock, ...] = ()
    target_window: str = ""
    script: tuple[Sentence, ...] = ()
    lemmas: tuple[LemmaAssertion, ...] = ()
    n: int | None = None
    structure: tuple[StructureCheck, ...] = ()

    @cached_property
    def P(self) -> HomogeneousSpace:
        return HomogeneousSpace(self.rs, self.p_crossed, "P")

    @cached_property
    def Q(self) -> HomogeneousSpace:
        return HomogeneousSpace(self.rs, self.q_crossed, "Q")

    @cached_property
    def F(self) -> HomogeneousSpace:
        return HomogeneousSpace(self.rs, self.p_crossed + self.q_crossed, "F")

    @cached_property
    def total(self) -> TotalSpace:
        return TotalSpace(self.F, self.h, self.H, f"V[{self.name}]")

    @cached_property
    def _objects(self) -> dict[Descriptor, FObject]:
        return {}

    @property
    def windows(self) -> frozenset[str]:
        names = {item for item in self.initial if item.startswith("Phi")}
        return frozenset(names | {self.target_window})

    def side_space(self, side: str) -> HomogeneousSpace:
        if side == "P":
            return self.P
        if side == "Q":
            return self.Q
        if side == "F":
            return self.F
        raise ValueError(f"Unknown side: {side}")

    def line_weight(self, a: int, b: int) -> Weight:
        return self.h * a + self.H * b

    @property
    def omega_v(self) -> tuple[int, int]:
        return self.canonical["V"]

    def build(self, descriptor: str | Descriptor) -> FObject:
        """
        Object on the zero section described by a descriptor string.

        Raises:
            ValueError: for unknown bundle names or malformed descriptors
        """
        if isinstance(descriptor, str):
            descriptor = Descriptor.parse(descriptor)
        cached = self._objects.get(descriptor)
        if cached is not None:
            return cached
        twist = self.line_weight(*descriptor.twist)
        if descriptor.name == "O":
            if descriptor.dual:
                raise ValueError("Use a negative twist instead of O_dual")
            bundle = Bundle.line(twist)
        else:
            named = self.bundles.get(descriptor.name)
            if named is None:
                raise ValueError(f"Unknown bundle {descriptor.name!r} for case {self.name}")
            side = self.side_space(named.side)
            weight = levi_dual(side, named.weight) if descriptor.dual else named.weight
            bundle = pullback(self.F, side, ((weight, 1),), twist)
        obj = FObject.of(bundle, descriptor.shift, str(descriptor))
        self._objects[descriptor] = obj
        return obj

    def side_weight(self, text: str, side: str) -> Weight:
        """Levi highest weight on P or Q of a descriptor evaluated on that side."""
        descriptor = Descriptor.parse(text)
        space = self.side_space(side)
        twist = self.line_weight(*descriptor.twist)
        if not space.is_character(twist):
            raise ValueError(f"Twist of {text} is not a line bundle on {side}")
        if descriptor.name == "O":
            return twist
        named = self.bundles.get(descriptor.name)
        if named is None or named.side != side:
            raise ValueError(f"{descriptor.name!r} is not a bundle on {side}")
        weight = levi_dual(space, named.weight) if descriptor.dual else named.weight
        return weight + twist

    def target_objects(self) -> tuple[str, ...]:
        return tuple(obj for block in self.target for obj in block.objects)

    def lemma_groups(self) -> dict[str, list[LemmaAssertion]]:
        groups: dict[str, list[LemmaAssertion]] = {}
        for assertion in self.lemmas:
            groups.setdefault(assertion.group, []).append(assertion)
        return groups


# Loading


def parse_case_name(name: str, n: int | None = None) -> tuple[str, int | None]:
    """Split "Mukai(3)" into ("Mukai", 3); plain names keep the given n."""
    match = _CASE_NAME.match(name.strip())
    if not match:
        raise ValueError(f"Unknown case: {name!r}")
    family = match.group("family")
    if match.group("n") is not None:
        if n is not None and n != int(match.group("n")):
            raise ValueError(f"Conflicting n for case {name!r}: {n}")
        n = int(match.group("n"))
    known = {key.lower(): key for key in (*CASE_FILES, *PARAMETRIC_CASES)}
    if family.lower() not in known:
        raise ValueError(f"Unknown case: {name!r}")
    return known[family.lower()], n


def load_case(
    name: str,
    n: int | None = None,
    lemma_window: int = DEFAULT_LEMMA_WINDOW,
    max_n: int = DEFAULT_MAX_N,
) -> FlopCase:
    """
    Load a case and run its consistency checks.

    Raises:
        ValueError: for unknown names or out-of-range n
        CaseDataError: if the consistency checks fail
    """
    family, n = parse_case_name(name, n)
    if family in PARAMETRIC_CASES:
        if n is None:
            raise ValueError(f"Case {family} needs a parameter n")
        low = PARAMETRIC_CASES[family]
        if not low <= n <= max_n:
            raise ValueError(f"{family}(n) is supported for {low} <= n <= {max_n}, got {n}")
        case = _mukai_case(n) if family == "Mukai" else _standard_case(n)
    else:
        if n is not None:
            raise ValueError(f"Case {family} takes no parameter")
        case = _case_from_toml(CASES_DIR / CASE_FILES[family])
        case.lemmas = _c2_lemmas() if family == "C2" else _ag4_lemmas(lemma_window)

    case.structure = tuple(structure_checks(case))
    failures = [check for check in case.structure if not check.passed]
    if failures:
        details = "; ".join(f"{c.label}: {c.detail}" for c in failures)
        raise CaseDataError(f"Case data for {case.name} is inconsistent: {details}")
    return case


def _weight(values: list[int]) -> Weight:
    return Weight(tuple(int(v) for v in values))


def _pair(values: list[int]) -> tuple[int, int]:
    if len(values) != 2:
        raise ValueError(f"Expected a pair (a, b), got {values}")
    return int(values[0]), int(values[1])


def _case_from_toml(path: Path) -> FlopCase:
    with open(path, "rb") as case_file:
        data = tomllib.load(case_file)

    rs = RootSystem.parse(data["root_system"])
    bundles = {
        name: NamedBundle(name, spec["side"], _weight(spec["weight"]))
        for name, spec in data.get("bundles", {}).items()
    }
    pushforwards = tuple(
        PushforwardSpec(
            along=spec["along"],
            line=_pair(spec["line"]),
            weight=_weight(spec["weight"]),
            degree=int(spec.get("degree", 0)),
            rank=int(spec["rank"]),
            det=_pair(spec["det"]),
            equals=spec.get("equals"),
        )
        for spec in data.get("pushforwards", [])
    )
    script = tuple(
        Sentence(sentence["ref"], tuple(Move.from_dict(m) for m in sentence["moves"]))
        for sentence in data.get("script", [])
    )
    target = tuple(
        TargetBlock(block["label"], tuple(block["objects"]))
        for block in data.get("target", [])
    )
    return FlopCase(
        name=data["name"],
        rs=rs,
        p_crossed=tuple(i - 1 for i in data["p_crossed"]),
        q_crossed=tuple(i - 1 for i in data["q_crossed"]),
        h=_weight(data["h"]),
        H=_weight(data["H"]),
        standard_weight=_weight(data["standard_weight"]),
        standard_dim=int(data["standard_dim"]),
        canonical={key: _pair(value) for key, value in data["canonical"].items()},
        bundles=bundles,
        pushforwards=pushforwards,
        identities=tuple((i["left"], i["right"]) for i in data.get("identities", [])),
        sequences=tuple(
            (s["sub"], s["middle"], s["quotient"]) for s in data.get("sequences", [])
        ),
        initial=tuple(data["initial"]),
        target=target,
        target_window=data["target_window"],
        script=script,
    )


# Parametric families


def _unit(rank: int, index: int) -> Weight:
    return Weight(tuple(1 if i == index else 0 for i in range(rank)))


def _triangle_layout(n: int, rows: int) -> tuple[list[str], list[str], int]:
    """
    Column-major initial collection, its reordering after the first rotation,
    and the size of the rotated upper-left triangle.

    Row j holds O(i,j) for j <= i <= n + j; column c is read top to bottom.
    """
    shift = rows
    initial = [
        f"O({c},{j})"
        for c in range(0, n + rows)
        for j in range(max(0, c - n), min(c, rows - 1) + 1)
    ]
    triangle = (n - 1) * n // 2
    columns: dict[int, list[int]] = {}
    for c in range(n - 1, n + rows):
        columns[c] = list(range(max(0, c - n), rows))
    for c in range(0, n - 1):
        for j in range(0, c + 1):
            columns.setdefault(c + shift, []).append(j + shift)
    reordered = [f"O({c},{j})" for c in sorted(columns) for j in sorted(columns[c])]
    return initial, reordered, triangle


def _triangle_script(n: int, rows: int, twist: int) -> tuple[Sentence, ...]:
    _, reordered, triangle = _triangle_layout(n, rows)
    last_column = n + rows - 1
    return (
        Sentence(
            "Mutate the upper-left triangle of the initial collection to the far "
            f"right; the rotation twists by O({twist}h+{twist}H).",
            (Move("rotate_far_right", count=triangle),),
        ),
        Sentence(
            "Mutate Phi- to the far right.",
            (Move("window_right", window="Phi-", steps=triangle, becomes="Phi1"),),
        ),
        Sentence(
            "Rearrange the collection column by column using the vanishing lemma.",
            (Move("reorder", order=tuple(reordered)),),
        ),
        Sentence(
            "Mutate Phi1 one step to the left.",
            (Move("window_left", window="Phi1", steps=1, becomes="Phi2"),),
        ),
        Sentence(
            f"Mutate O({last_column},{rows - 1}) to the far left.",
            (Move("rotate_far_left", count=1),),
        ),
    )


def _triangle_target(n: int, rows: int) -> tuple[TargetBlock, ...]:
    blocks = []
    for c in range(n - 1, n + rows - 1):
        objects = tuple(f"O({c},{j})" for j in range(c - n, c + 1))
        blocks.append(TargetBlock(f"D(Q) window O({c - n}H)..O({c}H) (x) O({c}h)", objects))
    return tuple(blocks)


def _vanishing_lemmas(n: int, group: str) -> list[LemmaAssertion]:
    return [
        LemmaAssertion(
            group, f"hom(O({i}h-{j}H), O) = 0", AssertionKind.ORTHOGONAL, f"O({i},{-j})", "O"
        )
        for j in range(1, n)
        for i in range(1, n - j + 1)
    ]


def _mukai_case(n: int) -> FlopCase:
    rs = RootSystem.simple("A", n)
    initial, _, _ = _triangle_layout(n, n - 1)
    acyclic = [
        LemmaAssertion("acyclicity", f"O({a}h+{b}H) acyclic", AssertionKind.ACYCLIC, f"O({a},{b})")
        for j in range(1, n)
        for i in range(1, n - j + 1)
        for a, b in ((-i, j), (-(i + 1), j - 1))
    ]
    return FlopCase(
        name=f"Mukai({n})",
        rs=rs,
        p_crossed=(0,),
        q_crossed=(n - 1,),
        h=_unit(n, 0),
        H=_unit(n, n - 1),
        standard_weight=_unit(n, 0),
        standard_dim=n + 1,
        canonical={
            "P": (-(n + 1), 0),
            "Q": (0, -(n + 1)),
            "F": (-n, -n),
            "V": (-(n - 1), -(n - 1)),
        },
        pushforwards=(
            PushforwardSpec("P", (0, 1), _unit(n, n - 1), 0, n, (1, 0)),
            PushforwardSpec("Q", (1, 0), _unit(n, 0), 0, n, (0, 1)),
        ),
        initial=(*initial, "Phi-"),
        target=_triangle_target(n, n - 1),
        target_window="Phi2",
        script=_triangle_script(n, n - 1, n - 1),
        lemmas=(*acyclic, *_vanishing_lemmas(n, "vanishing")),
        n=n,
    )


def _standard_case(n: int) -> FlopCase:
    rs = RootSystem.product(RootSystem.simple("A", n), RootSystem.simple("A", n))
    rank = rs.rank
    initial, _, _ = _triangle_layout(n, n)
    return FlopCase(
        name=f"Std({n})",
        rs=rs,
        p_crossed=(0,),
        q_crossed=(n,),
        h=_unit(rank, 0),
        H=_unit(rank, n),
        standard_weight=_unit(rank, 0),
        standard_dim=n + 1,
        canonical={
            "P": (-(n + 1), 0),
            "Q": (0, -(n + 1)),
            "F": (-(n + 1), -(n + 1)),
            "V": (-n, -n),
        },
        pushforwards=(
            PushforwardSpec("P", (0, 1), _unit(rank, n), 0, n + 1, (0, 0)),
            PushforwardSpec("Q", (1, 0), _unit(rank, 0), 0, n + 1, (0, 0)),
        ),
        initial=(*initial, "Phi-"),
        target=_triangle_target(n, n),
        target_window="Phi2",
        script=_triangle_script(n, n, n),
        lemmas=tuple(_vanishing_lemmas(n, "vanishing")),
        n=n,
    )


# Lemma suites of the two sporadic cases


def _c2_lemmas() -> tuple[LemmaAssertion, ...]:
    return (
        LemmaAssertion(
            "koszul-extension",
            "hom(O(h), O(-h+H)) = k[-1]",
            AssertionKind.HOM,
            "O(1,0)",
            "O(-1,1)",
            expected=((1, 1),),
            expected_rep="k[-1]",
        ),
        LemmaAssertion(
            "cohomology",
            "H^*(O(-2h+H)) = k[-1]",
            AssertionKind.COHOMOLOGY,
            "O(-2,1)",
            expected=((1, 1),),
        ),
        LemmaAssertion(
            "pushforward",
            "pushforward of O(-2h) to Q is O_Q(-H)[-1]",
            AssertionKind.PUSHFORWARD,
            "O(-2,0)",
            "Q",
            expected=((1, 1),),
            expected_weight="O(0,-1)",
        ),
        LemmaAssertion(
            "pushforward",
            "pushforward of O(h) to Q is S_Q^vee",
            AssertionKind.PUSHFORWARD,
            "O(1,0)",
            "Q",
            expected=((0, 1),),
            expected_weight="S_dual",
        ),
        LemmaAssertion(
            "orthogonality",
            "O(h) and O(H) are mutually orthogonal",
            AssertionKind.ORTHOGONAL,
            "O(1,0)",
            "O(0,1)",
            mutual=True,
        ),
        LemmaAssertion(
            "sections",
            "hom(O, S^vee) = V^vee",
            AssertionKind.HOM,
            "O",
            "S_dual",
            expected=((0, 4),),
            expected_rep="V^vee",
        ),
    )


_AG4_FAMILIES = (
    ("P", ("O", "S")),
    ("P", ("Q", "S_dual")),
    ("Q", ("O", "Qt")),
    ("Q", ("Qt_dual", "St_dual")),
)


def _ag4_lemmas(window: int) -> tuple[LemmaAssertion, ...]:
    lemmas: list[LemmaAssertion] = []
    for a in (-4, -3, -2):
        lemmas.append(
            LemmaAssertion(
                "L1", f"hom(Qt, O(h{a:+d}H)) = 0", AssertionKind.ORTHOGONAL, "Qt", f"O(1,{a})"
            )
        )
    for a in (-3, -2, -1):
        lemmas.append(
            LemmaAssertion(
                "L2", f"hom(O, O(h{a:+d}H)) = 0", AssertionKind.ORTHOGONAL, "O", f"O(1,{a})"
            )
        )
    for side, names in _AG4_FAMILIES:
        for source in names:
            for target in names:
                for a in range(-window, window + 1):
                    twist = f"({a},-1)" if side == "P" else f"(-1,{a})"
                    lemmas.append(
                        LemmaAssertion(
                            "L3",
                            f"hom({source}, {target}{twist}) = 0",
                            AssertionKind.ORTHOGONAL,
                            source,
                            f"{target}{twist}",
                        )
                    )
    for source, target in (
        ("O", "St_dual(1,-2)"),
        ("Qt", "St_dual(1,-2)"),
        ("S", "O(2,-2)"),
        ("S_dual", "Q"),
    ):
        lemmas.append(
            LemmaAssertion(
                "L4", f"hom({source}, {target}) = 0", AssertionKind.ORTHOGONAL, source, target
            )
        )
    lemmas.append(
        LemmaAssertion(
            "L5", "hom(Qt^vee, O) = V", AssertionKind.HOM, "Qt_dual", "O",
            expected=((0, 5),), expected_rep="V",
        )
    )
    lemmas.append(
        LemmaAssertion(
            "L5", "hom(S, O) = V^vee", AssertionKind.HOM, "S", "O",
            expected=((0, 5),), expected_rep="V^vee",
        )
    )
    lemmas.append(
        LemmaAssertion(
            "L6", "hom(Qt, O(h-H)) = k[-1]", AssertionKind.HOM, "Qt", "O(1,-1)",
            expected=((1, 1),), expected_rep="k[-1]",
        )
    )
    lemmas.append(
        LemmaAssertion(
            "L6", "hom(O(-h+H), St^vee) = k", AssertionKind.HOM, "O(-1,1)", "St_dual",
            expected=((0, 1),), expected_rep="k",
        )
    )
    return tuple(lemmas)


def lemma_suite(case: FlopCase) -> tuple[LemmaAssertion, ...]:
    """All lemma assertions of a case, in group order."""
    return case.lemmas


def run_assertion(case: FlopCase, assertion: LemmaAssertion) -> AssertionResult:
    """Evaluate one lemma assertion."""
    total = case.total
    kind = assertion.kind
    if kind is AssertionKind.PUSHFORWARD:
        side = case.side_space(assertion.target or "")
        line = Descriptor.parse(assertion.source)
        bundle = pullback(
            case.F, side, ((Weight.zero(case.rs.rank), 1),), case.line_weight(*line.twist)
        )
        pushed = pushforward(case.F, bundle, side)
        expected = case.side_weight(assertion.expected_weight or "O", side.name)
        degree = assertion.expected[0][0] if assertion.expected else 0
        passed = pushed.pieces == ((expected, 1),) and -pushed.shift == degree
        computed = ", ".join(f"E{w}" for w, _ in pushed.pieces) or "0"
        return AssertionResult(
            assertion.group,
            assertion.label,
            passed,
            Certificate.EXACT.label,
            f"{computed} in degree {-pushed.shift}",
        )

    if kind in (AssertionKind.ACYCLIC, AssertionKind.COHOMOLOGY):
        obj = case.build(assertion.source)
        result = cohomology(case.F, obj.terms[0].bundle.shifted(obj.terms[0].shift))
        dims = result.value.dims()
        if kind is AssertionKind.ACYCLIC:
            passed = not dims and result.certificate >= Certificate.EXACT
        else:
            passed = dims == dict(assertion.expected) and result.certificate >= Certificate.EXACT
        return AssertionResult(
            assertion.group,
            assertion.label,
            passed,
            result.certificate.label,
            result.value.describe(),
        )

    source = case.build(assertion.source)
    target = case.build(assertion.target or "O")
    if kind is AssertionKind.ORTHOGONAL:
        verdict = is_orthogonal(total, source, target, assertion.mutual)
        certificate = min(h.certificate for h in verdict.homs)
        return AssertionResult(
            assertion.group,
            assertion.label,
            verdict.verdict is Verdict.ORTHOGONAL,
            certificate.label,
            "; ".join(h.describe() for h in verdict.homs),
            verdict.verdict.value,
        )

    hom = hom_V(total, source, target)
    passed = hom.dims() == dict(assertion.expected) and hom.certificate >= Certificate.EXACT
    if assertion.expected_rep is not None:
        passed = passed and hom.describe() == assertion.expected_rep
    return AssertionResult(
        assertion.group, assertion.label, passed, hom.certificate.label, hom.describe()
    )


# Consistency checks


def structure_checks(case: FlopCase) -> list[StructureCheck]:
    """Canonical classes, pushforward identities, filtrations and bundle identities."""
    checks: list[StructureCheck] = []
    for side in ("P", "Q", "F"):
        expected = case.line_weight(*case.canonical[side])
        actual = case.side_space(side).canonical_weight
        checks.append(
            StructureCheck(
                f"omega_{side}", actual == expected, f"computed {actual}, expected {expected}"
            )
        )
    omega_v = case.total.canonical
    checks.append(
        StructureCheck(
            "omega_V",
            omega_v == case.line_weight(*case.canonical["V"]),
            f"computed {omega_v}",
        )
    )
    checks.append(
        StructureCheck(
            "dim V",
            weyl_dimension(case.rs, case.standard_weight) == case.standard_dim,
            f"expected {case.standard_dim}",
        )
    )

    for spec in case.pushforwards:
        side = case.side_space(spec.along)
        bundle = pullback(
            case.F, side, ((Weight.zero(case.rs.rank), 1),), case.line_weight(*spec.line)
        )
        pushed = pushforward(case.F, bundle, side)
        weights = [w for w, _ in pushed.pieces]
        ok = weights == [spec.weight] and -pushed.shift == spec.degree
        if ok:
            ok = levi_rank(case.rs, side.crossed, spec.weight) == spec.rank
            ok = ok and levi_determinant(
                case.rs, side.crossed, spec.weight
            ) == case.line_weight(*spec.det)
        if ok and spec.equals:
            ok = case.side_weight(spec.equals, spec.along) == spec.weight
        checks.append(
            StructureCheck(
                f"pushforward of O{spec.line} to {spec.along}",
                ok,
                f"computed {weights} in degree {-pushed.shift}",
            )
        )

    for left, right in case.identities:
        same = case.build(left).normal_form() == case.build(right).normal_form()
        checks.append(StructureCheck(f"{left} = {right}", same))

    for sub, middle, quotient in case.sequences:
        pieces = case.build(middle).terms[0].bundle.pieces
        sub_pieces = case.build(sub).terms[0].bundle.pieces
        quotient_pieces = case.build(quotient).terms[0].bundle.pieces
        head, tail = pieces[: len(sub_pieces)], pieces[len(sub_pieces) :]
        ok = sorted(head, key=_piece_key) == sorted(sub_pieces, key=_piece_key) and sorted(
            tail, key=_piece_key
        ) == sorted(quotient_pieces, key=_piece_key)
        checks.append(StructureCheck(f"0 -> {sub} -> {middle} -> {quotient} -> 0", ok))
    return checks


def _piece_key(item: tuple[Weight, int]) -> tuple[tuple[int, ...], int]:
    return item[0].coords, item[1]


def available_cases(max_n: int = DEFAULT_MAX_N) -> list[str]:
    """Names accepted by load_case, parametric families listed with their range."""
    return [*CASE_FILES, f"Mukai(2..{max_n})", f"Std(1..{max_n})"]


__all__ = [
    "AssertionKind",
    "AssertionResult",
    "CaseDataError",
    "FlopCase",
    "LemmaAssertion",
    "Move",
    "NamedBundle",
    "Sentence",
    "StructureCheck",
    "TargetBlock",
    "available_cases",
    "lemma_suite",
    "load_case",
    "parse_case_name",
    "run_assertion",
    "structure_checks",
]
