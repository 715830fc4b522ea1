"""
Replay of mutation scripts on scenes of objects and opaque windows.

A scene is a semiorthogonal sequence of objects on the zero section and of
window markers standing for embedded derived categories. Each elementary step
produces a StepCertificate; any failed check raises ReplayError.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field, replace
from enum import Enum

import pandas as pd
import sympy

from flopverify.domain.bbw_engine import Certificate
from flopverify.domain.character_ring import g_character
from flopverify.domain.descriptors import Descriptor, normalize_label
from flopverify.domain.flop_catalog import FlopCase, Move
from flopverify.domain.weight_lattice import Weight
from flopverify.domain.zero_section_hom import (
    FObject,
    HomComplex,
    Verdict,
    character_product,
    character_sum,
    hom_V,
    is_orthogonal,
    k_class,
)

logger = logging.getLogger(__name__)


class StepKind(Enum):
    RIGHT_MUTATE = "RightMutateObject"
    LEFT_MUTATE = "LeftMutateObject"
    SWAP = "SwapOrthogonal"
    ROTATE_FAR_RIGHT = "SerreRotateBlockFarRight"
    ROTATE_FAR_LEFT = "SerreRotateBlockFarLeft"
    WINDOW_RIGHT = "MutateWindowRight"
    WINDOW_LEFT = "MutateWindowLeft"


@dataclass(frozen=True)
class SceneObject:
    descriptor: Descriptor
    obj: FObject

    @property
    def label(self) -> str:
        return self.descriptor.label

    def __str__(self) -> str:
        return str(self.descriptor)


@dataclass(frozen=True)
class Window:
    label: str

    def __str__(self) -> str:
        return self.label


SceneItem = SceneObject | Window


@dataclass(frozen=True)
class Scene:
    items: tuple[SceneItem, ...]

    def __post_init__(self):
        labels = [item.label for item in self.items]
        duplicates = sorted({label for label in labels if labels.count(label) > 1})
        if duplicates:
            raise ValueError(f"Scene labels must be unique, repeated: {duplicates}")

    @property
    def objects(self) -> tuple[SceneObject, ...]:
        return tuple(item for item in self.items if isinstance(item, SceneObject))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(item.label for item in self.items)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"No item labelled {label!r} in scene") from None

    def object_position(self, index: int) -> int:
        """Position of items[index] among the objects of the scene."""
        return sum(1 for item in self.items[:index] if isinstance(item, SceneObject))

    def replace(self, index: int, *items: SceneItem) -> "Scene":
        return Scene(self.items[:index] + items + self.items[index + len(items) :])

    def describe(self) -> list[str]:
        return [str(item) for item in self.items]


@dataclass(frozen=True)
class MutationStep:
    """
    One elementary step. ``indices`` are scene positions: the adjacent pair for
    mutations and swaps, the moved item for rotations, (from, to) for windows.
    """

    kind: StepKind
    indices: tuple[int, ...]
    claimed_result: Descriptor | None = None
    claimed_hom: tuple[tuple[int, int], ...] | None = None
    window_label: str | None = None
    reference: str = ""

    def __post_init__(self):
        if self.kind in (StepKind.LEFT_MUTATE, StepKind.RIGHT_MUTATE):
            if self.claimed_result is None:
                raise ValueError(f"{self.kind.value} needs a claimed result")
            if len(self.indices) != 2 or self.indices[1] != self.indices[0] + 1:
                raise ValueError(f"{self.kind.value} needs two adjacent indices")
        if self.kind is StepKind.SWAP and (
            len(self.indices) != 2 or self.indices[1] != self.indices[0] + 1
        ):
            raise ValueError("SwapOrthogonal needs two adjacent indices")


@dataclass(frozen=True)
class StepCertificate:
    number: int
    kind: StepKind
    reference: str
    description: str
    legal: bool
    homs: tuple[str, ...] = ()
    hom_certificate: str = ""
    k_class_ok: bool | None = None
    gram_ok: bool = True
    unimodular: bool = True
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.legal and self.k_class_ok is not False and self.gram_ok and self.unimodular

    def to_dict(self) -> dict:
        return {
            "step": self.number,
            "kind": self.kind.value,
            "reference": self.reference,
            "description": self.description,
            "legal": self.legal,
            "homs": list(self.homs),
            "hom_certificate": self.hom_certificate,
            "k_class_ok": self.k_class_ok,
            "gram_ok": self.gram_ok,
            "unimodular": self.unimodular,
            "notes": list(self.notes),
            "passed": self.passed,
        }


@dataclass(frozen=True)
class GramMatrix:
    labels: tuple[str, ...]
    values: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        size = len(self.labels)
        if len(self.values) != size or any(len(row) != size for row in self.values):
            raise ValueError("Gram matrix must be square and match its labels")

    def as_matrix(self) -> sympy.Matrix:
        return sympy.Matrix(self.values)

    def as_frame(self) -> pd.DataFrame:
        return pd.DataFrame(list(self.values), index=list(self.labels), columns=list(self.labels))

    def lower_is_zero(self) -> bool:
        return all(
            self.values[i][j] == 0 for i in range(len(self.labels)) for j in range(i)
        )

    def is_unipotent_upper(self) -> bool:
        return self.lower_is_zero() and all(
            self.values[i][i] == 1 for i in range(len(self.labels))
        )

    def to_dict(self) -> dict:
        return {"labels": list(self.labels), "values": [list(row) for row in self.values]}


class ReplayError(Exception):
    """A replay step failed; carries the step, computed Homs and certificates so far."""

    def __init__(
        self,
        message: str,
        step: MutationStep | None = None,
        homs: tuple[str, ...] = (),
        certificates: tuple[StepCertificate, ...] = (),
    ):
        super().__init__(message)
        self.step = step
        self.homs = homs
        self.certificates = certificates


@dataclass
class ReplayResult:
    case: str
    certificates: list[StepCertificate] = field(default_factory=list)
    initial_scene: list[str] = field(default_factory=list)
    final_scene: list[str] = field(default_factory=list)
    target_scene: list[str] = field(default_factory=list)
    initial_gram: GramMatrix | None = None
    final_gram: GramMatrix | None = None
    target_gram: GramMatrix | None = None
    mismatches: list[str] = field(default_factory=list)
    error: str | None = None

    @property
    def passed(self) -> bool:
        return (
            self.error is None
            and not self.mismatches
            and all(c.passed for c in self.certificates)
        )


class EulerCache:
    """chi(A, B) keyed by descriptor text; the Gram matrix is recomputed every step."""

    def __init__(self, case: FlopCase):
        self.case = case
        self._values: dict[tuple[str, str], int] = {}

    def hom(self, left: SceneObject, right: SceneObject) -> HomComplex:
        return hom_V(self.case.total, left.obj, right.obj)

    def __call__(self, left: SceneObject, right: SceneObject) -> int:
        key = (str(left.descriptor), str(right.descriptor))
        if key not in self._values:
            self._values[key] = self.hom(left, right).euler
        return self._values[key]


def gram_matrix(
    case: FlopCase, objects: tuple[SceneObject, ...], cache: EulerCache | None = None
) -> GramMatrix:
    """Euler pairings chi(E_i, E_j) of the objects in scene order."""
    chi = cache or EulerCache(case)
    values = tuple(tuple(chi(a, b) for b in objects) for a in objects)
    return GramMatrix(tuple(str(o.descriptor) for o in objects), values)


def make_object(case: FlopCase, descriptor: Descriptor | str) -> SceneObject:
    if isinstance(descriptor, str):
        descriptor = Descriptor.parse(descriptor)
    return SceneObject(descriptor, case.build(descriptor))


def initial_scene(case: FlopCase) -> Scene:
    items: list[SceneItem] = []
    for text in case.initial:
        items.append(Window(text) if text.startswith("Phi") else make_object(case, text))
    return Scene(tuple(items))


def _rep_character(case: FlopCase, hom: HomComplex, dual: bool) -> dict[Weight, int]:
    result: dict[Weight, int] = {}
    for weight, multiplicity in hom.euler_character:
        for nu, value in g_character(case.rs, weight).items():
            key = -nu if dual else nu
            result[key] = result.get(key, 0) + multiplicity * value
    return {w: c for w, c in result.items() if c}


def _mutation_matrix(size: int, p: int, chi: int, sign: int, left: bool) -> sympy.Matrix:
    """Rows express the new K-classes at p, p+1 in terms of the old ones."""
    matrix = sympy.eye(size)
    matrix[p, :] = sympy.zeros(1, size)
    matrix[p + 1, :] = sympy.zeros(1, size)
    if left:
        matrix[p, p + 1] = sign
        matrix[p, p] = -sign * chi
        matrix[p + 1, p] = 1
    else:
        matrix[p, p + 1] = 1
        matrix[p + 1, p + 1] = sign * chi
        matrix[p + 1, p] = -sign
    return matrix


def _permutation_matrix(size: int, p: int) -> sympy.Matrix:
    matrix = sympy.eye(size)
    matrix.row_swap(p, p + 1)
    return matrix


def apply_step(
    case: FlopCase,
    scene: Scene,
    step: MutationStep,
    number: int = 0,
    cache: EulerCache | None = None,
) -> tuple[Scene, StepCertificate]:
    """
    Apply one step and certify it.

    Raises:
        ValueError: if the step indices do not fit the scene
        ReplayError: if a check fails
    """
    chi = cache or EulerCache(case)
    for index in step.indices:
        if not 0 <= index < len(scene.items):
            raise ValueError(f"Step index {index} out of range for scene of {len(scene.items)}")
    before = gram_matrix(case, scene.objects, chi)

    matrix: sympy.Matrix | None
    if step.kind in (StepKind.WINDOW_RIGHT, StepKind.WINDOW_LEFT):
        new_scene, certificate = _window_step(scene, step, number)
        matrix = sympy.eye(len(before.labels))
    elif step.kind in (StepKind.ROTATE_FAR_RIGHT, StepKind.ROTATE_FAR_LEFT):
        new_scene, certificate = _rotation_step(case, scene, step, number, chi)
        matrix = None
    elif step.kind is StepKind.SWAP:
        new_scene, certificate = _swap_step(case, scene, step, number)
        matrix = _permutation_matrix(len(before.labels), scene.object_position(step.indices[0]))
    else:
        new_scene, certificate, matrix = _mutation_step(case, scene, step, number, chi)

    after = gram_matrix(case, new_scene.objects, chi)
    notes = list(certificate.notes)
    gram_ok = after.lower_is_zero()
    if not gram_ok:
        notes.append("Gram matrix has non-zero entries below the diagonal")
    if matrix is not None and matrix * before.as_matrix() * matrix.T != after.as_matrix():
        gram_ok = False
        notes.append("Gram matrix does not transform by the step matrix")

    certificate = replace(certificate, gram_ok=gram_ok, notes=tuple(notes))
    logger.debug(f"Step {number} {step.kind.value}: {certificate.description}")
    if not certificate.passed:
        raise ReplayError(
            f"Step {number} ({step.kind.value}) failed: {certificate.description}; "
            + "; ".join(certificate.notes),
            step,
            certificate.homs,
            (certificate,),
        )
    return new_scene, certificate


def _window_step(scene: Scene, step: MutationStep, number: int) -> tuple[Scene, StepCertificate]:
    start = step.indices[0]
    end = step.indices[1] if len(step.indices) > 1 else start
    item = scene.items[start]
    if not isinstance(item, Window):
        raise ReplayError(f"Step {number}: item {start} is not a window", step)
    if abs(end - start) > 1 or not 0 <= end < len(scene.items):
        raise ReplayError(f"Step {number}: a window moves one place at a time", step)
    items = list(scene.items)
    items[start], items[end] = items[end], items[start]
    label = step.window_label or item.label
    items[end] = Window(label)
    direction = "right" if step.kind is StepKind.WINDOW_RIGHT else "left"
    if end != start:
        description = f"{item.label} moves {direction} past {items[start]}"
    else:
        description = f"{item.label} absorbs an empty mutation"
    if label != item.label:
        description += f", now {label}"
    certificate = StepCertificate(number, step.kind, step.reference, description, True)
    return Scene(tuple(items)), certificate


def _rotation_step(
    case: FlopCase, scene: Scene, step: MutationStep, number: int, chi: EulerCache
) -> tuple[Scene, StepCertificate]:
    a, b = case.omega_v
    index = step.indices[0]
    item = scene.items[index]
    if not isinstance(item, SceneObject):
        raise ReplayError(f"Step {number}: only objects rotate around the helix", step)
    far_right = step.kind is StepKind.ROTATE_FAR_RIGHT
    if far_right and index != 0:
        raise ReplayError(f"Step {number}: only the first item rotates to the far right", step)
    if not far_right and index != len(scene.items) - 1:
        raise ReplayError(f"Step {number}: only the last item rotates to the far left", step)

    twist = (-a, -b) if far_right else (a, b)
    rotated = make_object(case, item.descriptor.twisted(*twist))
    rest = tuple(o for o in scene.objects if o is not item)
    parity = -1 if case.total.dim % 2 else 1
    failures = []
    for other in rest:
        if far_right:
            ok = chi(rotated, other) == parity * chi(other, item)
        else:
            ok = chi(other, rotated) == parity * chi(item, other)
        if not ok:
            failures.append(f"Serre identity fails against {other}")
    if chi(rotated, rotated) != chi(item, item):
        failures.append("Serre rotation changes chi(E, E)")

    remaining = scene.items[:index] + scene.items[index + 1 :]
    items = remaining + (rotated,) if far_right else (rotated,) + remaining
    direction = "far right" if far_right else "far left"
    certificate = StepCertificate(
        number,
        step.kind,
        step.reference,
        f"{item} rotates to the {direction} as {rotated}",
        not failures,
        notes=(f"twist by O({twist[0]}h{twist[1]:+d}H)", *failures),
    )
    return Scene(items), certificate


def _swap_step(
    case: FlopCase, scene: Scene, step: MutationStep, number: int
) -> tuple[Scene, StepCertificate]:
    first, second = (scene.items[i] for i in step.indices)
    if not isinstance(first, SceneObject) or not isinstance(second, SceneObject):
        raise ReplayError(f"Step {number}: SwapOrthogonal needs two objects", step)
    result = is_orthogonal(case.total, first.obj, second.obj, mutual=True)
    homs = tuple(h.describe() for h in result.homs)
    certificate = StepCertificate(
        number,
        step.kind,
        step.reference,
        f"{first} and {second} swap",
        result.verdict is Verdict.ORTHOGONAL,
        homs=homs,
        hom_certificate=min(h.certificate for h in result.homs).label,
        notes=() if result.verdict is Verdict.ORTHOGONAL else (f"verdict {result.verdict.value}",),
    )
    return scene.replace(step.indices[0], second, first), certificate


def _mutation_step(
    case: FlopCase, scene: Scene, step: MutationStep, number: int, chi: EulerCache
) -> tuple[Scene, StepCertificate, sympy.Matrix]:
    p = step.indices[0]
    first, second = scene.items[p], scene.items[p + 1]
    if not isinstance(first, SceneObject) or not isinstance(second, SceneObject):
        raise ReplayError(f"Step {number}: {step.kind.value} needs two objects", step)
    assert step.claimed_result is not None
    left = step.kind is StepKind.LEFT_MUTATE
    hom = chi.hom(first, second)
    result = make_object(case, step.claimed_result)
    notes: list[str] = []

    legal = hom.certificate >= Certificate.EXACT
    if not legal:
        notes.append(f"hom({first}, {second}) is only known up to Euler characteristic")
    if step.claimed_hom is not None and hom.dims() != dict(step.claimed_hom):
        legal = False
        notes.append(f"claimed hom {dict(step.claimed_hom)}, computed {hom.dims()}")

    total = case.total
    euler = hom.euler
    if left:
        moved_class = character_product(_rep_character(case, hom, dual=False), k_class(total, first.obj))
        expected = character_sum((1, k_class(total, second.obj)), (-1, moved_class))
    else:
        moved_class = character_product(_rep_character(case, hom, dual=True), k_class(total, second.obj))
        expected = character_sum((1, moved_class), (-1, k_class(total, first.obj)))
    actual = k_class(total, result.obj)
    sign = 1
    if actual == expected:
        k_ok = True
    elif actual == character_sum((-1, expected)):
        k_ok = True
        sign = -1
        notes.append("K-class agrees up to sign; the claimed shift differs by an odd amount")
    else:
        k_ok = False
        notes.append(f"K-class of {result} does not match the mutation")

    if hom.graded.total_dimension() == 1:
        (degree, _), = hom.dims().items()
        kind = "extension" if degree == 1 else "cone"
        notes.append(f"one-dimensional hom in degree {degree}: {result} is the unique {kind}")

    size = len(scene.objects)
    position = scene.object_position(p)
    matrix = _mutation_matrix(size, position, euler, sign, left)
    unimodular = matrix.det() in (1, -1)

    if left:
        new_scene = scene.replace(p, result, first)
        description = f"L_{first} {second} = {result}"
    else:
        new_scene = scene.replace(p, second, result)
        description = f"R_{second} {first} = {result}"

    certificate = StepCertificate(
        number,
        step.kind,
        step.reference,
        description,
        legal,
        homs=(hom.describe(),),
        hom_certificate=hom.certificate.label,
        k_class_ok=k_ok,
        unimodular=unimodular,
        notes=tuple(notes),
    )
    return new_scene, certificate, matrix


# Scripts


def expand_move(scene: Scene, move: Move, reference: str, windows: frozenset[str]) -> list[MutationStep]:
    """
    Elementary steps of a move against the current scene.

    Steps are indexed for sequential application; rotations expand to one
    step per call and run_script repeats them ``count`` times.
    """
    label = lambda text: normalize_label(text, windows)  # noqa: E731
    if move.kind == "rotate_far_right":
        return [MutationStep(StepKind.ROTATE_FAR_RIGHT, (0,), reference=reference)]
    if move.kind == "rotate_far_left":
        last = len(scene.items) - 1
        return [MutationStep(StepKind.ROTATE_FAR_LEFT, (last,), reference=reference)]
    if move.kind in ("window_right", "window_left"):
        start = scene.index(move.window or "")
        direction = 1 if move.kind == "window_right" else -1
        kind = StepKind.WINDOW_RIGHT if direction == 1 else StepKind.WINDOW_LEFT
        if move.steps == 0:
            return [MutationStep(kind, (start, start), window_label=move.becomes, reference=reference)]
        steps = []
        for offset in range(move.steps):
            position = start + direction * offset
            final = offset == move.steps - 1
            steps.append(
                MutationStep(
                    kind,
                    (position, position + direction),
                    window_label=move.becomes if final else None,
                    reference=reference,
                )
            )
        return steps
    if move.kind == "swap":
        i, j = scene.index(label(move.obj or "")), scene.index(label(move.past or ""))
        if abs(i - j) != 1:
            raise ReplayError(f"{move.obj} and {move.past} are not adjacent")
        return [MutationStep(StepKind.SWAP, (min(i, j), max(i, j)), reference=reference)]
    if move.kind in ("left_mutate", "right_mutate"):
        i, j = scene.index(label(move.left or "")), scene.index(label(move.right or ""))
        if j != i + 1:
            raise ReplayError(f"{move.left} does not immediately precede {move.right}")
        kind = StepKind.LEFT_MUTATE if move.kind == "left_mutate" else StepKind.RIGHT_MUTATE
        return [
            MutationStep(
                kind,
                (i, j),
                claimed_result=Descriptor.parse(move.result or ""),
                claimed_hom=move.hom,
                reference=reference,
            )
        ]
    return _reorder_steps(scene, move, reference, windows)


def _reorder_steps(
    scene: Scene, move: Move, reference: str, windows: frozenset[str]
) -> list[MutationStep]:
    """Bubble sort of a contiguous run of objects into the requested order."""
    wanted = [normalize_label(text, windows) for text in move.order]
    positions = sorted(scene.index(label) for label in wanted)
    start = positions[0]
    if positions != list(range(start, start + len(wanted))):
        raise ReplayError("Reorder must act on a contiguous run of items")
    rank = {label: k for k, label in enumerate(wanted)}
    current = [item.label for item in scene.items[start : start + len(wanted)]]
    steps = []
    changed = True
    while changed:
        changed = False
        for k in range(len(current) - 1):
            if rank[current[k]] > rank[current[k + 1]]:
                steps.append(MutationStep(StepKind.SWAP, (start + k, start + k + 1), reference=reference))
                current[k], current[k + 1] = current[k + 1], current[k]
                changed = True
    return steps


def run_script(
    case: FlopCase,
    on_step: Callable[[StepCertificate], None] | None = None,
) -> ReplayResult:
    """
    Replay the case script from the initial scene and compare with the target.

    Step failures are recorded in ``error`` with the certificates gathered so far.
    """
    cache = EulerCache(case)
    scene = initial_scene(case)
    result = ReplayResult(case.name, initial_scene=scene.describe())
    result.initial_gram = gram_matrix(case, scene.objects, cache)
    windows = case.windows

    try:
        for obj in scene.objects:
            own = cache.hom(obj, obj)
            if own.dims() != {0: 1} or own.certificate < Certificate.EXACT:
                raise ReplayError(f"{obj} is not exceptional: hom = {own.describe()}")
        if not result.initial_gram.lower_is_zero():
            raise ReplayError("Initial collection is not semiorthogonal at the level of chi")

        number = 0
        for sentence in case.script:
            for move in sentence.moves:
                repeats = move.count if move.kind.startswith("rotate") else 1
                for _ in range(repeats):
                    steps = expand_move(scene, move, sentence.reference, windows)
                    while steps:
                        step = steps.pop(0)
                        number += 1
                        scene, certificate = apply_step(case, scene, step, number, cache)
                        result.certificates.append(certificate)
                        if on_step is not None:
                            on_step(certificate)
    except ReplayError as error:
        result.error = str(error)
        result.final_scene = scene.describe()
        return result

    result.final_scene = scene.describe()
    _compare_with_target(case, scene, result, cache)
    return result


def _compare_with_target(case: FlopCase, scene: Scene, result: ReplayResult, cache: EulerCache) -> None:
    target_objects = [make_object(case, text) for text in case.target_objects()]
    result.target_scene = [str(o.descriptor) for o in target_objects] + [case.target_window]
    final = [
        make_object(case, o.descriptor.with_shift(0)) for o in scene.objects
    ]
    if len(final) != len(target_objects):
        result.mismatches.append(
            f"final scene has {len(final)} objects, target has {len(target_objects)}"
        )
    for position, (got, want) in enumerate(zip(final, target_objects, strict=False)):
        if got.obj.normal_form(with_shift=False) != want.obj.normal_form(with_shift=False):
            result.mismatches.append(f"position {position}: {got} differs from {want}")

    windows = [item.label for item in scene.items if isinstance(item, Window)]
    if windows != [case.target_window]:
        result.mismatches.append(f"final windows {windows}, expected {case.target_window}")
    elif not isinstance(scene.items[-1], Window):
        result.mismatches.append(f"{case.target_window} is not the last component")

    result.final_gram = gram_matrix(case, tuple(final), cache)
    result.target_gram = gram_matrix(case, tuple(target_objects), cache)
    if result.final_gram.values != result.target_gram.values:
        result.mismatches.append("Gram matrices of final and target collections differ")


__all__ = [
    "EulerCache",
    "GramMatrix",
    "MutationStep",
    "ReplayError",
    "ReplayResult",
    "Scene",
    "SceneObject",
    "StepCertificate",
    "StepKind",
    "Window",
    "apply_step",
    "expand_move",
    "gram_matrix",
    "initial_scene",
    "make_object",
    "run_script",
]
