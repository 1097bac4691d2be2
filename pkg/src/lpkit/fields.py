"""Exact scalar fields: the rationals, prime fields GF(p), and GF(4)/GF(8).

Elements are immutable and always stored in canonical form, so equality is
plain comparison of the stored representation.  Python ints mix freely with
elements (an int ``n`` means ``n * 1`` in the field); mixing elements of two
different fields raises :class:`FieldMismatchError`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

__all__ = [
    "FieldError",
    "FieldMismatchError",
    "ParseError",
    "FieldDescriptor",
    "FieldElement",
    "RATIONAL",
    "GF",
    "binary_op",
    "parse_element",
    "format_element",
    "characteristic",
]

# x^2+x+1 and x^3+x+1, as bit masks
BINARY_MODULI = {2: 0b111, 3: 0b1011}


class FieldError(ValueError):
    pass


class FieldMismatchError(FieldError):
    pass


class ParseError(FieldError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _clmul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def _poly_reduce(a: int, modulus: int) -> int:
    deg = modulus.bit_length() - 1
    while a.bit_length() - 1 >= deg:
        a ^= modulus << (a.bit_length() - 1 - deg)
    return a


@dataclass(frozen=True)
class FieldDescriptor:
    """Which field a scalar lives in.

    ``kind`` is ``"rational"``, ``"prime"`` (with ``p``) or ``"binary"``
    (with ``k`` in {2, 3}, giving GF(2^k)).
    """

    kind: str
    p: Optional[int] = None
    k: Optional[int] = None

    def __post_init__(self):
        if self.kind == "rational":
            if self.p is not None or self.k is not None:
                raise FieldError("rational field takes no parameters")
        elif self.kind == "prime":
            if not isinstance(self.p, int) or not _is_prime(self.p):
                raise FieldError(f"p must be a prime integer, got {self.p!r}")
            if self.k is not None:
                raise FieldError("prime field takes no k")
        elif self.kind == "binary":
            if self.k not in BINARY_MODULI:
                raise FieldError(f"binary field needs k in {{2, 3}}, got {self.k!r}")
            if self.p is not None:
                raise FieldError("binary field takes no p")
        else:
            raise FieldError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rational(cls) -> "FieldDescriptor":
        return cls("rational")

    @classmethod
    def prime(cls, p: int) -> "FieldDescriptor":
        return cls("prime", p=p)

    @classmethod
    def binary(cls, k: int) -> "FieldDescriptor":
        return cls("binary", k=k)

    def characteristic(self) -> int:
        if self.kind == "rational":
            return 0
        if self.kind == "prime":
            return self.p
        return 2

    @property
    def size(self) -> Optional[int]:
        """Number of elements, or None for the rationals."""
        if self.kind == "rational":
            return None
        if self.kind == "prime":
            return self.p
        return 1 << self.k

    @property
    def modulus(self) -> int:
        return BINARY_MODULI[self.k]

    def __call__(self, value: Union[int, Fraction, str, "FieldElement"]) -> "FieldElement":
        """Coerce ``value`` into this field."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError(f"element of {value.field} used as {self}")
            return value
        if isinstance(value, str):
            return parse_element(self, value)
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return self._from_int(value)
        if isinstance(value, Fraction):
            if self.kind == "rational":
                return FieldElement(self, value)
            return self._from_int(value.numerator) / self._from_int(value.denominator)
        raise TypeError(f"cannot coerce {type(value).__name__} into {self}")

    def _from_int(self, n: int) -> "FieldElement":
        if self.kind == "rational":
            return FieldElement(self, Fraction(n))
        if self.kind == "prime":
            return FieldElement(self, n % self.p)
        return FieldElement(self, n & 1)

    @property
    def zero(self) -> "FieldElement":
        return self._from_int(0)

    @property
    def one(self) -> "FieldElement":
        return self._from_int(1)

    @property
    def generator(self) -> "FieldElement":
        """The class of ``w`` (the polynomial variable) in GF(2^k)."""
        if self.kind != "binary":
            raise FieldError("only binary fields have a polynomial generator")
        return FieldElement(self, 0b10)

    def elements(self) -> Iterator["FieldElement"]:
        """Enumerate a finite field in canonical order."""
        if self.kind == "rational":
            raise FieldError("the rationals cannot be enumerated")
        for v in range(self.size):
            yield FieldElement(self, v)

    def to_json(self) -> dict:
        if self.kind == "rational":
            return {"kind": "rational"}
        if self.kind == "prime":
            return {"kind": "prime", "p": self.p}
        return {"kind": "binary", "k": self.k}

    @classmethod
    def from_json(cls, obj) -> "FieldDescriptor":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise FieldError(f"malformed field descriptor: {obj!r}")
        kind = obj["kind"]
        if kind == "rational":
            return cls.rational()
        if kind == "prime":
            return cls.prime(obj.get("p"))
        if kind == "binary":
            return cls.binary(obj.get("k"))
        raise FieldError(f"unknown field kind {kind!r}")

    @classmethod
    def from_string(cls, text: str) -> "FieldDescriptor":
        """Parse the command-line form ``rational``, ``prime:p`` or ``binary:k``."""
        text = text.strip()
        if text in ("rational", "Q"):
            return cls.rational()
        name, sep, arg = text.partition(":")
        if not sep or not arg.strip().isdigit():
            raise FieldError(f"malformed field {text!r}; use rational, prime:p or binary:k")
        if name == "prime":
            return cls.prime(int(arg))
        if name == "binary":
            return cls.binary(int(arg))
        raise FieldError(f"unknown field kind {name!r}")

    def __str__(self) -> str:
        if self.kind == "rational":
            return "rational"
        if self.kind == "prime":
            return f"prime:{self.p}"
        return f"binary:{self.k}"


RATIONAL = FieldDescriptor.rational()


def GF(n: int) -> FieldDescriptor:
    """GF(p) for prime p, or GF(4) / GF(8)."""
    if n == 4:
        return FieldDescriptor.binary(2)
    if n == 8:
        return FieldDescriptor.binary(3)
    return FieldDescriptor.prime(n)


class FieldElement:
    """An immutable scalar of a :class:`FieldDescriptor`.

    ``value`` is a reduced :class:`~fractions.Fraction`, a residue in
    ``range(p)``, or a bit mask of polynomial coefficients of degree < k.
    """

    __slots__ = ("field", "value")

    def __init__(self, field: FieldDescriptor, value):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _coerce(self, other) -> "FieldElement":
        if type(other) is FieldElement and other.field is self.field:
            return other
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(f"cannot combine {self.field} and {other.field} elements")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        kind = self.field.kind
        if kind == "rational":
            return FieldElement(self.field, self.value + other.value)
        if kind == "prime":
            return FieldElement(self.field, (self.value + other.value) % self.field.p)
        return FieldElement(self.field, self.value ^ other.value)

    __radd__ = __add__

    def __neg__(self):
        kind = self.field.kind
        if kind == "rational":
            return FieldElement(self.field, -self.value)
        if kind == "prime":
            return FieldElement(self.field, -self.value % self.field.p)
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        kind = self.field.kind
        if kind == "rational":
            return FieldElement(self.field, self.value - other.value)
        if kind == "prime":
            return FieldElement(self.field, (self.value - other.value) % self.field.p)
        return FieldElement(self.field, self.value ^ other.value)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        kind = self.field.kind
        if kind == "rational":
            return FieldElement(self.field, self.value * other.value)
        if kind == "prime":
            return FieldElement(self.field, self.value * other.value % self.field.p)
        prod = _poly_reduce(_clmul(self.value, other.value), self.field.modulus)
        return FieldElement(self.field, prod)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self:
            raise ZeroDivisionError(f"division by zero in {self.field}")
        kind = self.field.kind
        if kind == "rational":
            return FieldElement(self.field, 1 / self.value)
        if kind == "prime":
            return FieldElement(self.field, pow(self.value, -1, self.field.p))
        # a^(2^k - 2) in the multiplicative group of order 2^k - 1
        return self ** ((1 << self.field.k) - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        acc = self.field.one
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def __bool__(self) -> bool:
        return bool(self.value)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(f"cannot compare {self.field} and {other.field} elements")
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == self.field(other).value
        return NotImplemented

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self) -> int:
        return hash((self.field, self.value))

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"FieldElement({self.field}, {format_element(self)!r})"


def binary_op(op: str, a: FieldElement, b: FieldElement) -> FieldElement:
    """Apply ``op`` in {"add", "sub", "mul", "div"} to two elements of one field."""
    if a.field != b.field:
        raise FieldMismatchError(f"cannot combine {a.field} and {b.field} elements")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def characteristic(field: FieldDescriptor) -> int:
    return field.characteristic()


_INT_RE = re.compile(r"[+-]?\d+")
_RATIONAL_RE = re.compile(r"([+-]?\d+)(?:/([+-]?\d+))?")
_TERM_RE = re.compile(r"(?:([01])|w(?:\^(\d+))?)")


def parse_element(field: FieldDescriptor, text: str) -> FieldElement:
    """Parse the element grammar of ``field``.

    Rationals and prime-field residues are decimal integers or ``a/b``;
    GF(2^k) elements are sums of ``1``, ``w`` and ``w^n`` such as ``w^2+1``.
    Prime-field residues are reduced mod p.
    """
    if not isinstance(text, str):
        raise ParseError(f"expected a string element, got {type(text).__name__}")
    s = text.replace("−", "-").replace(" ", "").strip()
    if not s:
        raise ParseError("empty element")
    if field.kind in ("rational", "prime"):
        m = _RATIONAL_RE.fullmatch(s)
        if not m:
            raise ParseError(f"malformed {field} element {text!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise ParseError(f"zero denominator in {text!r}")
        if field.kind == "rational":
            return FieldElement(field, Fraction(num, den))
        if den % field.p == 0:
            raise ParseError(f"denominator of {text!r} vanishes mod {field.p}")
        return field._from_int(num) / field._from_int(den)

    bits = 0
    for term in s.split("+"):
        m = _TERM_RE.fullmatch(term)
        if not m:
            raise ParseError(f"malformed {field} element {text!r}")
        if m.group(1) is not None:
            bits ^= int(m.group(1))
        else:
            bits ^= 1 << (int(m.group(2)) if m.group(2) else 1)
    return FieldElement(field, _poly_reduce(bits, field.modulus))


def format_element(x: FieldElement) -> str:
    kind = x.field.kind
    if kind == "rational":
        return str(x.value)
    if kind == "prime":
        return str(x.value)
    if not x.value:
        return "0"
    terms = []
    for deg in range(x.value.bit_length() - 1, -1, -1):
        if x.value >> deg & 1:
            terms.append("1" if deg == 0 else "w" if deg == 1 else f"w^{deg}")
    return "+".join(terms)
