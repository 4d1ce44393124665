"""Coefficient rings: F_p, Z and Z_m."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInput


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class Ring:
    """kind is 'fp', 'z' or 'zmod'; modulus is None for 'z'."""

    kind: str
    modulus: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "fp":
            if self.modulus is None or not is_prime(self.modulus):
                raise InvalidInput(f"F_p needs a prime p, got {self.modulus}")
        elif self.kind == "zmod":
            if self.modulus is None or self.modulus < 2:
                raise InvalidInput(f"Z_m needs m >= 2, got {self.modulus}")
        elif self.kind == "z":
            if self.modulus is not None:
                raise InvalidInput("Z takes no modulus")
        else:
            raise InvalidInput(f"unknown ring kind {self.kind!r}")

    @property
    def is_field(self) -> bool:
        return self.kind == "fp"

    def normalize(self, x: int) -> int:
        return int(x) if self.modulus is None else int(x) % self.modulus

    def __str__(self) -> str:
        if self.kind == "z":
            return "z"
        if self.kind == "fp":
            return "f2" if self.modulus == 2 else f"fp:{self.modulus}"
        return f"zmod:{self.modulus}"


F2 = Ring("fp", 2)
Z = Ring("z")


def Fp(p: int) -> Ring:
    return Ring("fp", p)


def Zmod(m: int) -> Ring:
    return Ring("zmod", m)


def parse_ring(text: str) -> Ring:
    """Parse 'f2', 'fp:<p>', 'z' or 'zmod:<m>'."""
    t = text.strip().lower()
    try:
        if t == "f2":
            return F2
        if t == "z":
            return Z
        if t.startswith("fp:"):
            return Fp(int(t[3:]))
        if t.startswith("zmod:"):
            return Zmod(int(t[5:]))
    except ValueError as exc:
        raise InvalidInput(f"bad ring {text!r}") from exc
    raise InvalidInput(f"bad ring {text!r}")
