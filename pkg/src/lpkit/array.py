"""Parameter arrays: data model, existence check, and derived scalars.

A parameter array over a field is the tuple

    (theta_0..theta_d; theta*_0..theta*_d; varphi_1..varphi_d; phi_1..phi_d)

of eigenvalue sequences and first/second split sequences.  Split sequences
are stored 0-based in Python (``varphi[0]`` is varphi_1); the helpers
``_vp``/``_ph`` give the 1-based view with the boundary values
varphi_0 = varphi_{d+1} = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .fields import FieldDescriptor, FieldElement, FieldError

__all__ = [
    "StructureError",
    "InvalidArrayError",
    "ParameterArray",
    "ValidationReport",
    "CaseLabel",
    "AnalysisReport",
    "CONDITIONS",
    "validate",
    "require_valid",
    "compute_a",
    "compute_a_star",
    "compute_a_via_second_split",
    "compute_H",
    "compute_beta",
    "classify_case",
    "reverse_theta",
    "dualize",
]

CONDITIONS = (
    "C1_nonzero",
    "C2_distinct",
    "C3_phi_identity",
    "C4_phi2_identity",
    "C5_beta_constant",
)


class StructureError(ValueError):
    """Sequence lengths or fields of a parameter array do not line up."""


class InvalidArrayError(ValueError):
    """The array fails the existence conditions for a Leonard pair."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        tags = ", ".join(f"{t}@{i}" for t, i in report.failures)
        super().__init__(f"invalid parameter array: {tags}")


def _as_elements(field: FieldDescriptor, values) -> Tuple[FieldElement, ...]:
    return tuple(field(v) for v in values)


@dataclass(frozen=True)
class ParameterArray:
    field: FieldDescriptor
    theta: Tuple[FieldElement, ...]
    theta_star: Tuple[FieldElement, ...]
    varphi: Tuple[FieldElement, ...]
    phi: Tuple[FieldElement, ...]

    def __post_init__(self):
        for name in ("theta", "theta_star", "varphi", "phi"):
            seq = getattr(self, name)
            object.__setattr__(self, name, _as_elements(self.field, seq))
        n = len(self.theta)
        if n == 0:
            raise StructureError("theta must have at least one entry")
        if len(self.theta_star) != n:
            raise StructureError(f"theta_star has {len(self.theta_star)} entries, expected {n}")
        for name in ("varphi", "phi"):
            if len(getattr(self, name)) != n - 1:
                raise StructureError(f"{name} has {len(getattr(self, name))} entries, expected {n - 1}")

    @classmethod
    def build(cls, field: FieldDescriptor, theta, theta_star, varphi, phi) -> "ParameterArray":
        """Construct from ints, Fractions, element strings or elements."""
        return cls(field, tuple(theta), tuple(theta_star), tuple(varphi), tuple(phi))

    @property
    def d(self) -> int:
        return len(self.theta) - 1

    def _vp(self, i: int) -> FieldElement:
        return self.varphi[i - 1] if 1 <= i <= self.d else self.field.zero

    def _ph(self, i: int) -> FieldElement:
        return self.phi[i - 1] if 1 <= i <= self.d else self.field.zero

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "d": self.d,
            "theta": [str(x) for x in self.theta],
            "theta_star": [str(x) for x in self.theta_star],
            "varphi": [str(x) for x in self.varphi],
            "phi": [str(x) for x in self.phi],
        }

    @classmethod
    def from_json(cls, obj) -> "ParameterArray":
        if not isinstance(obj, dict):
            raise StructureError("parameter array JSON must be an object")
        missing = [k for k in ("field", "theta", "theta_star", "varphi", "phi") if k not in obj]
        if missing:
            raise StructureError(f"parameter array JSON lacks {', '.join(missing)}")
        fd = FieldDescriptor.from_json(obj["field"])
        seqs = {}
        for key in ("theta", "theta_star", "varphi", "phi"):
            vals = obj[key]
            if not isinstance(vals, list) or not all(isinstance(v, str) for v in vals):
                raise FieldError(f"{key} must be a list of element strings")
            seqs[key] = tuple(fd(v) for v in vals)
        pa = cls(fd, **seqs)
        if "d" in obj and obj["d"] != pa.d:
            raise StructureError(f"declared d={obj['d']} but theta has {pa.d + 1} entries")
        return pa


@dataclass(frozen=True)
class ValidationReport:
    failures: Tuple[Tuple[str, int], ...] = ()

    @property
    def verdict(self) -> str:
        return "valid" if not self.failures else "invalid"

    @property
    def valid(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "failures": [{"condition": t, "index": i} for t, i in self.failures],
        }


@dataclass(frozen=True)
class CaseLabel:
    tag: str
    beta: Optional[FieldElement] = None

    def __str__(self) -> str:
        return self.tag if self.beta is None else f"{self.tag}(beta={self.beta})"


@dataclass(frozen=True)
class AnalysisReport:
    a: Tuple[FieldElement, ...]
    a_star: Tuple[FieldElement, ...]
    H: Optional[FieldElement]
    case: CaseLabel
    balanced: bool
    essentially_bipartite: bool
    xi: Optional[FieldElement]
    essentially_dual_bipartite: bool
    xi_star: Optional[FieldElement]

    def to_json(self) -> dict:
        def s(x):
            return None if x is None else str(x)

        return {
            "a": [str(x) for x in self.a],
            "a_star": [str(x) for x in self.a_star],
            "H": s(self.H),
            "case": self.case.tag,
            "beta": s(self.case.beta),
            "balanced": self.balanced,
            "essentially_bipartite": self.essentially_bipartite,
            "xi": s(self.xi),
            "essentially_dual_bipartite": self.essentially_dual_bipartite,
            "xi_star": s(self.xi_star),
        }


def _split_sums(pa: ParameterArray) -> List[FieldElement]:
    # entry i-1 is sum_{h<i} (theta_h - theta_{d-h}) / (theta_0 - theta_d)
    th, d = pa.theta, pa.d
    if d == 0:
        return []
    scale = (th[0] - th[d]).inverse()
    out, total = [], pa.field.zero
    for h in range(d):
        total = total + (th[h] - th[d - h])
        out.append(total * scale)
    return out


def _ratios(seq: Sequence[FieldElement], i: int) -> Optional[FieldElement]:
    den = seq[i - 1] - seq[i]
    if not den:
        return None
    return (seq[i - 2] - seq[i + 1]) / den


def validate(pa: ParameterArray) -> ValidationReport:
    """Check all five existence conditions and report every failure.

    Failures carry the index at which the condition broke (1-based for
    split sequences, the larger colliding index for eigenvalues, and the
    ratio index i in 2..d-1 for the constancy condition).  A condition that
    cannot be evaluated because of an earlier collision is reported as
    failing at that index.
    """
    d = pa.d
    th, ths = pa.theta, pa.theta_star
    fails: List[Tuple[str, int]] = []

    for i in range(1, d + 1):
        if not pa._vp(i) or not pa._ph(i):
            fails.append(("C1_nonzero", i))

    for j in range(d + 1):
        for i in range(j):
            if th[i] == th[j] or ths[i] == ths[j]:
                fails.append(("C2_distinct", j))
                break

    if d >= 1 and th[0] == th[d]:
        fails.extend((tag, 1) for tag in ("C3_phi_identity", "C4_phi2_identity"))
    else:
        sums = _split_sums(pa)
        for i in range(1, d + 1):
            rhs3 = pa._ph(1) * sums[i - 1] + (ths[i] - ths[0]) * (th[i - 1] - th[d])
            if pa._vp(i) != rhs3:
                fails.append(("C3_phi_identity", i))
        for i in range(1, d + 1):
            ssum = sums[i - 1]
            rhs4 = pa._vp(1) * ssum + (ths[i] - ths[0]) * (th[d - i + 1] - th[0])
            if pa._ph(i) != rhs4:
                fails.append(("C4_phi2_identity", i))

    if d >= 3:
        common = None
        for i in range(2, d):
            r, rs = _ratios(th, i), _ratios(ths, i)
            if r is None or rs is None or r != rs:
                fails.append(("C5_beta_constant", i))
                continue
            if common is None:
                common = r
            elif r != common:
                fails.append(("C5_beta_constant", i))

    return ValidationReport(tuple(fails))


def require_valid(pa: ParameterArray) -> None:
    report = validate(pa)
    if not report.valid:
        raise InvalidArrayError(report)


def _a_from(th, ths, split, i, d):
    # th[i] + split_i/(ths_i - ths_{i-1}) - split_{i+1}/(ths_{i+1} - ths_i),
    # boundary terms dropped since split_0 = split_{d+1} = 0
    val = th
    if i >= 1:
        val = val + split(i) / (ths[i] - ths[i - 1])
    if i <= d - 1:
        val = val - split(i + 1) / (ths[i + 1] - ths[i])
    return val


def compute_a(pa: ParameterArray) -> Tuple[FieldElement, ...]:
    """Diagonal entries a_0..a_d of A in an eigenbasis of A*, from the first split sequence."""
    require_valid(pa)
    return _compute_a(pa)


def _compute_a(pa: ParameterArray) -> Tuple[FieldElement, ...]:
    d = pa.d
    return tuple(_a_from(pa.theta[i], pa.theta_star, pa._vp, i, d) for i in range(d + 1))


def compute_a_star(pa: ParameterArray) -> Tuple[FieldElement, ...]:
    require_valid(pa)
    return _compute_a_star(pa)


def _compute_a_star(pa: ParameterArray) -> Tuple[FieldElement, ...]:
    d = pa.d
    return tuple(_a_from(pa.theta_star[i], pa.theta, pa._vp, i, d) for i in range(d + 1))


def compute_a_via_second_split(pa: ParameterArray):
    """Recompute (a, a*) from the second split sequence instead of the first."""
    require_valid(pa)
    return _compute_a_second(pa)


def _compute_a_second(pa: ParameterArray):
    d = pa.d
    th, ths = pa.theta, pa.theta_star
    a = tuple(_a_from(th[d - i], ths, pa._ph, i, d) for i in range(d + 1))
    # a*_i uses phi_{d-i+1} on the left and phi_{d-i} on the right
    a_star = tuple(
        _a_from(ths[d - i], th, lambda j: pa._ph(d - j + 1), i, d) for i in range(d + 1)
    )
    return a, a_star


def _h_pair(pa: ParameterArray, a, a_star):
    d, th, ths = pa.d, pa.theta, pa.theta_star
    left = (a[0] - a[d]) * (ths[0] - ths[1]) * (ths[d - 1] - ths[d]) / (ths[0] - ths[d])
    right = (a_star[0] - a_star[d]) * (th[0] - th[1]) * (th[d - 1] - th[d]) / (th[0] - th[d])
    return left, right


def compute_H(pa: ParameterArray) -> FieldElement:
    """The scalar H, which vanishes exactly when a_0 = a_d.

    Both the unstarred and starred expressions are evaluated; they must
    agree on any valid array, so disagreement raises AssertionError.
    """
    if pa.d < 1:
        raise ValueError("H is only defined for d >= 1")
    require_valid(pa)
    left, right = _h_pair(pa, _compute_a(pa), _compute_a_star(pa))
    if left != right:
        raise AssertionError(f"H expressions disagree: {left} != {right}")
    return left


def compute_beta(pa: ParameterArray) -> FieldElement:
    """q + 1/q, read off the eigenvalues as (theta_0 - theta_3)/(theta_1 - theta_2) - 1."""
    if pa.d < 3:
        raise ValueError("beta is only defined for d >= 3")
    th = pa.theta
    return (th[0] - th[3]) / (th[1] - th[2]) - 1


def classify_case(pa: ParameterArray) -> CaseLabel:
    require_valid(pa)
    if pa.d <= 2:
        return CaseLabel("Case0")
    beta = compute_beta(pa)
    if pa.field.characteristic() == 2:
        return CaseLabel("CaseV" if not beta else "CaseI", beta)
    if beta == 2:
        return CaseLabel("CaseII", beta)
    if beta == -2:
        return CaseLabel("CaseIII" if pa.d % 2 == 0 else "CaseIV", beta)
    return CaseLabel("CaseI", beta)


def reverse_theta(pa: ParameterArray) -> ParameterArray:
    """The array for the ordering (theta_d..theta_0; theta*_0..theta*_d).

    Reversing the eigenvalue order swaps the first and second split sequences.
    """
    require_valid(pa)
    return ParameterArray(pa.field, pa.theta[::-1], pa.theta_star, pa.phi, pa.varphi)


def dualize(pa: ParameterArray) -> ParameterArray:
    """The array of the dual pair (A*, A): starred and unstarred data swap and
    the second split sequence is read backwards."""
    return ParameterArray(pa.field, pa.theta_star, pa.theta, pa.varphi, pa.phi[::-1])
