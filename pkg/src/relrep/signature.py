from __future__ import annotations

from dataclasses import dataclass

COMPOSITION_KINDS = ("angelic", "demonic", "none")
UNARY_OPS = ("D", "R", "conv")
CONSTANTS = ("zero", "one", "id")


class SignatureError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    """Operations a structure carries.

    ``unary`` is a subset of ``{"D", "R", "conv"}`` and ``constants`` a
    subset of ``{"zero", "one", "id"}``.
    """

    composition: str = "demonic"
    unary: frozenset = frozenset({"D", "R"})
    order: bool = False
    constants: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "unary", frozenset(self.unary))
        object.__setattr__(self, "constants", frozenset(self.constants))
        if self.composition not in COMPOSITION_KINDS:
            raise SignatureError(f"unknown composition kind {self.composition!r}")
        if not self.unary <= set(UNARY_OPS):
            raise SignatureError(f"unknown unary operations {sorted(self.unary - set(UNARY_OPS))}")
        if not self.constants <= set(CONSTANTS):
            raise SignatureError(f"unknown constants {sorted(self.constants - set(CONSTANTS))}")
        if self.composition == "demonic":
            if "conv" in self.unary:
                raise SignatureError("demonic composition cannot be combined with converse")
            if "D" not in self.unary:
                raise SignatureError("demonic composition requires D")

    @property
    def has_composition(self) -> bool:
        return self.composition != "none"

    def tokens(self) -> list[str]:
        """Signature flags in DSL order."""
        out = [f"compose={self.composition}"]
        out += [op for op in UNARY_OPS if op in self.unary]
        if self.order:
            out.append("le")
        out += [c for c in CONSTANTS if c in self.constants]
        return out

    def __str__(self):
        return " ".join(self.tokens())


DRS = Signature("demonic", {"D", "R"})
DRA = Signature("angelic", {"D", "R"})
