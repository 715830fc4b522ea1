"""
Text descriptors of objects on the zero section.

Grammar (version 1):

    descriptor := name ["_dual"] ["(" twist ")"] ["[" shift "]"]
    twist      := int "," int  |  linear form in h and H, e.g. "-h+H", "2h-2H", "0"

``O(a,b)`` is the line bundle O(a*h + b*H); a named bundle with twist (a,b)
is tensored with that line bundle; ``[k]`` is the derived shift.
"""

import re
from dataclasses import dataclass, replace

GRAMMAR_VERSION = 1

_DESCRIPTOR = re.compile(
    r"^(?P<name>[A-Za-z][A-Za-z0-9]*?)(?P<dual>_dual)?"
    r"(?:\((?P<twist>[^)]*)\))?(?:\[(?P<shift>[+-]?\d+)\])?$"
)
_PAIR = re.compile(r"^\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*$")
_TERM = re.compile(r"([+-]?)\s*(\d*)\s*(h|H)")


@dataclass(frozen=True)
class Descriptor:
    name: str
    dual: bool = False
    twist: tuple[int, int] = (0, 0)
    shift: int = 0

    @classmethod
    def parse(cls, text: str) -> "Descriptor":
        """
        Parse a descriptor string.

        Raises:
            ValueError: on malformed input
        """
        match = _DESCRIPTOR.match(text.strip().replace(" ", ""))
        if not match:
            raise ValueError(f"Invalid descriptor: {text!r}")
        twist = (0, 0)
        if match.group("twist") is not None:
            twist = parse_twist(match.group("twist"))
        shift = int(match.group("shift")) if match.group("shift") else 0
        return cls(match.group("name"), bool(match.group("dual")), twist, shift)

    @property
    def label(self) -> str:
        """Descriptor text without the shift; used as a scene label."""
        suffix = "_dual" if self.dual else ""
        return f"{self.name}{suffix}({self.twist[0]},{self.twist[1]})"

    def twisted(self, a: int, b: int) -> "Descriptor":
        return replace(self, twist=(self.twist[0] + a, self.twist[1] + b))

    def with_shift(self, shift: int) -> "Descriptor":
        return replace(self, shift=shift)

    def __str__(self) -> str:
        return f"{self.label}[{self.shift}]" if self.shift else self.label


def parse_twist(text: str) -> tuple[int, int]:
    """Parse "a,b" or a linear form in h and H into coefficients (a, b)."""
    text = text.strip()
    pair = _PAIR.match(text)
    if pair:
        return int(pair.group(1)), int(pair.group(2))
    compact = text.replace(" ", "")
    if compact in ("", "0"):
        return 0, 0
    coefficients = {"h": 0, "H": 0}
    position = 0
    for term in _TERM.finditer(compact):
        if term.start() != position or (position and not term.group(1)):
            raise ValueError(f"Invalid twist: {text!r}")
        value = int(term.group(2)) if term.group(2) else 1
        coefficients[term.group(3)] += -value if term.group(1) == "-" else value
        position = term.end()
    if position != len(compact):
        raise ValueError(f"Invalid twist: {text!r}")
    return coefficients["h"], coefficients["H"]


def normalize_label(text: str, windows: frozenset[str] = frozenset()) -> str:
    """Scene label of a descriptor or window name."""
    if text in windows or text.startswith("Phi"):
        return text
    return Descriptor.parse(text).label
