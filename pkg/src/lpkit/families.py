"""Closed-form parameter arrays for every case of the q-Racah taxonomy.

Each generator evaluates its parameterization and then runs the result
through :func:`~lpkit.array.validate`; arbitrary scalar choices can
collide eigenvalues or zero a split-sequence entry, and such choices are
rejected with :class:`GeneratorError` rather than returned.
"""

from __future__ import annotations

from dataclasses import dataclass, fields as dc_fields
from typing import Dict

from .array import ParameterArray, validate
from .fields import FieldDescriptor, FieldElement

__all__ = [
    "GeneratorError",
    "CaseIData",
    "CaseIIData",
    "CaseIIIData",
    "CaseIVData",
    "CaseVData",
    "generate_case_I",
    "generate_case_II",
    "generate_case_III",
    "generate_case_IV",
    "generate_case_V",
    "generate_d2_counterexample",
    "generate_case0_d1",
    "generate_case0_d2",
    "generate_case0_d0",
    "GENERATORS",
]


class GeneratorError(ValueError):
    pass


class _CaseData:
    """Coerces every scalar attribute into ``self.field`` after init."""

    field: FieldDescriptor

    def __post_init__(self):
        for f in dc_fields(self):
            if f.name in ("field", "d"):
                continue
            object.__setattr__(self, f.name, self.field(getattr(self, f.name)))

    @classmethod
    def from_params(cls, field: FieldDescriptor, d, params: Dict[str, str]):
        names = [f.name for f in dc_fields(cls) if f.name not in ("field", "d")]
        unknown = set(params) - set(names)
        if unknown:
            raise GeneratorError(f"unknown parameters: {', '.join(sorted(unknown))}")
        missing = [n for n in names if n not in params]
        if missing:
            raise GeneratorError(f"missing parameters: {', '.join(missing)}")
        kwargs = {n: field(params[n]) for n in names}
        if any(f.name == "d" for f in dc_fields(cls)):
            if d is None:
                raise GeneratorError("--d is required for this family")
            kwargs["d"] = d
        return cls(field=field, **kwargs)


@dataclass(frozen=True)
class CaseIData(_CaseData):
    field: FieldDescriptor
    d: int
    q: FieldElement
    eta: FieldElement
    mu: FieldElement
    h: FieldElement
    eta_star: FieldElement
    mu_star: FieldElement
    h_star: FieldElement
    tau: FieldElement


@dataclass(frozen=True)
class CaseIIData(_CaseData):
    field: FieldDescriptor
    d: int
    eta: FieldElement
    mu: FieldElement
    h: FieldElement
    eta_star: FieldElement
    mu_star: FieldElement
    h_star: FieldElement
    tau: FieldElement


@dataclass(frozen=True)
class CaseIIIData(_CaseData):
    field: FieldDescriptor
    d: int
    eta: FieldElement
    h: FieldElement
    s: FieldElement
    eta_star: FieldElement
    h_star: FieldElement
    s_star: FieldElement
    tau: FieldElement


# Cases III and IV share a parameter set; only the parity of d differs.
CaseIVData = CaseIIIData


@dataclass(frozen=True)
class CaseVData(_CaseData):
    field: FieldDescriptor
    theta0: FieldElement
    theta0_star: FieldElement
    h: FieldElement
    s: FieldElement
    h_star: FieldElement
    s_star: FieldElement
    r: FieldElement


def _finish(field, theta, theta_star, varphi, phi) -> ParameterArray:
    pa = ParameterArray(field, tuple(theta), tuple(theta_star), tuple(varphi), tuple(phi))
    report = validate(pa)
    if not report.valid:
        tags = ", ".join(f"{t}@{i}" for t, i in report.failures)
        raise GeneratorError(f"generated array is not a parameter array ({tags})")
    return pa


def _check_d(d: int, low: int = 3):
    if not isinstance(d, int) or d < low:
        raise GeneratorError(f"d must be an integer >= {low}, got {d!r}")


def generate_case_I(data: CaseIData) -> ParameterArray:
    F, d, q = data.field, data.d, data.q
    _check_d(d)
    if not q:
        raise GeneratorError("q must be nonzero")
    for i in range(1, d + 1):
        if q ** i == 1:
            raise GeneratorError(f"q^{i} = 1")
    eta, mu, h = data.eta, data.mu, data.h
    es, ms, hs, tau = data.eta_star, data.mu_star, data.h_star, data.tau
    theta = [eta + mu * q ** i + h * q ** (d - i) for i in range(d + 1)]
    theta_star = [es + ms * q ** i + hs * q ** (d - i) for i in range(d + 1)]
    varphi, phi = [], []
    for i in range(1, d + 1):
        k = (q ** i - 1) * (q ** (d - i + 1) - 1)
        varphi.append(k * (tau - mu * ms * q ** (i - 1) - h * hs * q ** (d - i)))
        phi.append(k * (tau - h * ms * q ** (i - 1) - mu * hs * q ** (d - i)))
    return _finish(F, theta, theta_star, varphi, phi)


def generate_case_II(data: CaseIIData) -> ParameterArray:
    F, d = data.field, data.d
    _check_d(d)
    char = F.characteristic()
    if char == 2:
        raise GeneratorError("Case II needs characteristic other than 2")
    if 0 < char <= d:
        raise GeneratorError(f"characteristic {char} divides some i <= d, so some varphi_i = 0")
    eta, mu, h = data.eta, data.mu, data.h
    es, ms, hs, tau = data.eta_star, data.mu_star, data.h_star, data.tau
    if not h and not mu:
        raise GeneratorError("h = 0 requires mu != 0")
    if not hs and not ms:
        raise GeneratorError("h_star = 0 requires mu_star != 0")
    two = F(2)
    half_d = F(d) / two
    mid = F(d + 1) / two
    theta = [eta + mu * (F(i) - half_d) + h * i * (d - i) for i in range(d + 1)]
    theta_star = [es + ms * (F(i) - half_d) + hs * i * (d - i) for i in range(d + 1)]
    varphi, phi = [], []
    for i in range(1, d + 1):
        k = F(i * (d - i + 1))
        off = F(i) - mid
        tail = h * hs * ((i - 1) * (d - i))
        varphi.append(k * (tau - mu * ms / two + (h * ms + mu * hs) * off + tail))
        phi.append(k * (tau + mu * ms / two + (h * ms - mu * hs) * off + tail))
    return _finish(F, theta, theta_star, varphi, phi)


def _alternating(F, d, eta, s, h):
    half_d = F(d) / F(2)
    out = []
    for i in range(d + 1):
        x = h * (F(i) - half_d)
        out.append(eta + s + x if i % 2 == 0 else eta - s - x)
    return out


def _check_minus_one(F, d, parity):
    _check_d(d)
    if d % 2 != parity:
        raise GeneratorError(f"d must be {'even' if parity == 0 else 'odd'}, got {d}")
    if F.characteristic() == 2:
        raise GeneratorError("q = -1 families need characteristic other than 2")


def generate_case_III(data: CaseIIIData) -> ParameterArray:
    """q = -1 with d even."""
    F, d = data.field, data.d
    _check_minus_one(F, d, 0)
    eta, h, s = data.eta, data.h, data.s
    es, hs, ss, tau = data.eta_star, data.h_star, data.s_star, data.tau
    if not h or not hs:
        raise GeneratorError("h and h_star must be nonzero")
    theta = _alternating(F, d, eta, s, h)
    theta_star = _alternating(F, d, es, ss, hs)
    mid = F(d + 1) / F(2)
    varphi, phi = [], []
    for i in range(1, d + 1):
        x = h * hs * (F(i) - mid)
        if i % 2 == 0:
            varphi.append(i * (tau - s * hs - ss * h - x))
            phi.append(i * (tau - s * hs + ss * h + x))
        else:
            varphi.append((d - i + 1) * (tau + s * hs + ss * h + x))
            phi.append((d - i + 1) * (tau + s * hs - ss * h - x))
    return _finish(F, theta, theta_star, varphi, phi)


def generate_case_IV(data: CaseIVData) -> ParameterArray:
    """q = -1 with d odd."""
    F, d = data.field, data.d
    _check_minus_one(F, d, 1)
    eta, h, s = data.eta, data.h, data.s
    es, hs, ss, tau = data.eta_star, data.h_star, data.s_star, data.tau
    if not (h * hs):
        raise GeneratorError("h * h_star must be nonzero")
    theta = _alternating(F, d, eta, s, h)
    theta_star = _alternating(F, d, es, ss, hs)
    mid = F(d + 1) / F(2)
    varphi, phi = [], []
    for i in range(1, d + 1):
        base = h * hs * (i * (d - i + 1))
        if i % 2 == 0:
            varphi.append(base)
            phi.append(base)
        else:
            off = F(i) - mid
            varphi.append(tau - 2 * s * ss + base - 2 * (h * ss + hs * s) * off)
            phi.append(tau + 2 * s * ss + base - 2 * (h * ss - hs * s) * off)
    return _finish(F, theta, theta_star, varphi, phi)


def generate_case_V(data: CaseVData) -> ParameterArray:
    """Characteristic 2, q = 1; the diameter is always 3."""
    F = data.field
    if F.characteristic() != 2:
        raise GeneratorError("Case V needs characteristic 2")
    if F.size is not None and F.size < 4:
        raise GeneratorError("Case V needs a field with at least 4 elements")
    t0, ts0 = data.theta0, data.theta0_star
    h, s, hs, ss, r = data.h, data.s, data.h_star, data.s_star, data.r
    for name, v in (("h", h), ("s", s), ("h_star", hs), ("s_star", ss)):
        if not v:
            raise GeneratorError(f"{name} must be nonzero")
    if s == 1 or ss == 1:
        raise GeneratorError("s and s_star must differ from 1")
    theta = [t0, t0 + h * (s + 1), t0 + h, t0 + h * s]
    theta_star = [ts0, ts0 + hs * (ss + 1), ts0 + hs, ts0 + hs * ss]
    hh = h * hs
    varphi = [hh * r, hh, hh * (r + s + ss)]
    phi = [hh * (r + s * (1 + ss)), hh, hh * (r + ss * (1 + s))]
    return _finish(F, theta, theta_star, varphi, phi)


def _three(field, values, name):
    vals = tuple(field(v) for v in values)
    if len(set(vals)) != len(vals):
        raise GeneratorError(f"{name} entries must be pairwise distinct")
    return vals


def generate_d2_counterexample(field: FieldDescriptor, theta, theta_star) -> ParameterArray:
    """The d = 2 array with H = 0; always balanced, and essentially
    (dual) bipartite only when the eigenvalues are in arithmetic progression."""
    return generate_case0_d2(field, theta, theta_star, field.zero)


def generate_case0_d2(field: FieldDescriptor, theta, theta_star, H) -> ParameterArray:
    """Every d = 2 parameter array, parameterized by the eigenvalues and H."""
    if len(theta) != 3 or len(theta_star) != 3:
        raise GeneratorError("d = 2 needs three theta and three theta_star values")
    t = _three(field, theta, "theta")
    ts = _three(field, theta_star, "theta_star")
    H = field(H)
    varphi = [H - (t[0] - t[1]) * (ts[0] - ts[1]), H - (t[1] - t[2]) * (ts[1] - ts[2])]
    phi = [H + (t[1] - t[2]) * (ts[0] - ts[1]), H + (t[0] - t[1]) * (ts[1] - ts[2])]
    return _finish(field, t, ts, varphi, phi)


def generate_case0_d1(field: FieldDescriptor, theta, theta_star, varphi1) -> ParameterArray:
    if len(theta) != 2 or len(theta_star) != 2:
        raise GeneratorError("d = 1 needs two theta and two theta_star values")
    t = _three(field, theta, "theta")
    ts = _three(field, theta_star, "theta_star")
    v1 = field(varphi1)
    if not v1:
        raise GeneratorError("varphi_1 must be nonzero")
    p1 = v1 + (ts[1] - ts[0]) * (t[1] - t[0])
    if not p1:
        raise GeneratorError("derived phi_1 vanishes")
    return _finish(field, t, ts, [v1], [p1])


def generate_case0_d0(field: FieldDescriptor, theta0, theta0_star) -> ParameterArray:
    return _finish(field, [field(theta0)], [field(theta0_star)], [], [])


GENERATORS = {
    "case1": (CaseIData, generate_case_I),
    "case2": (CaseIIData, generate_case_II),
    "case3": (CaseIIIData, generate_case_III),
    "case4": (CaseIVData, generate_case_IV),
    "case5": (CaseVData, generate_case_V),
}
