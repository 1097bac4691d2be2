"""Seeded sweep: generate arrays from every family and verify them.

Sample ``index`` draws all of its randomness from
``random.Random(f"{seed}:{index}")``, so a sample's content depends only on
the seed and its position in the plan, never on worker count or order.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from .array import ParameterArray, _compute_a, _compute_a_star
from .families import (
    CaseIData,
    CaseIIData,
    CaseIIIData,
    CaseVData,
    GeneratorError,
    generate_case0_d0,
    generate_case0_d1,
    generate_case0_d2,
    generate_case_I,
    generate_case_II,
    generate_case_III,
    generate_case_IV,
    generate_case_V,
)
from .fields import GF, RATIONAL, FieldDescriptor, FieldElement, FieldError
from .matrices import MatrixError, oracle_a
from .theorems import check_all

__all__ = ["FAMILIES", "DEFAULT_FIELDS", "SweepConfig", "Sample", "SweepSummary", "iter_samples", "sweep"]

PRIME_FIELDS = tuple(GF(p) for p in (5, 7, 11, 13))
BINARY_FIELDS = (GF(4), GF(8))
ALL_FIELDS = (RATIONAL,) + PRIME_FIELDS + BINARY_FIELDS

DEFAULT_FIELDS: Dict[str, Tuple[FieldDescriptor, ...]] = {
    "d0": ALL_FIELDS,
    "d1": ALL_FIELDS,
    "d2": ALL_FIELDS,
    "d2counter": ALL_FIELDS,
    "I": (RATIONAL,) + PRIME_FIELDS + (GF(8),),
    "II": (RATIONAL,) + PRIME_FIELDS,
    "III": (RATIONAL,) + PRIME_FIELDS,
    "IV": (RATIONAL,) + PRIME_FIELDS,
    "V": BINARY_FIELDS,
}
FAMILIES = tuple(DEFAULT_FIELDS)

Q_GRID = tuple(Fraction(n) for n in range(-3, 4))
Q_RATIOS = (Fraction(2), Fraction(3), Fraction(1, 2), Fraction(-2), Fraction(-1, 2))


@dataclass(frozen=True)
class SweepConfig:
    seed: int = 42
    samples: int = 100
    families: Tuple[str, ...] = FAMILIES
    fields: Optional[Tuple[FieldDescriptor, ...]] = None
    d_min: int = 3
    d_max: int = 6
    oracle_max_d: int = 8
    workers: int = 1

    def __post_init__(self):
        unknown = set(self.families) - set(FAMILIES)
        if unknown:
            raise ValueError(f"unknown families: {', '.join(sorted(unknown))}")
        if self.d_min < 0 or self.d_max < self.d_min:
            raise ValueError("need 0 <= d_min <= d_max")
        if self.samples < 0:
            raise ValueError("samples must be nonnegative")

    def plan(self) -> List[Tuple[str, FieldDescriptor]]:
        """(family, field) for every sample index, in index order."""
        out = []
        for fam in self.families:
            for fd in DEFAULT_FIELDS[fam]:
                if self.fields is not None and fd not in self.fields:
                    continue
                out.extend([(fam, fd)] * self.samples)
        return out


class _Draw:
    def __init__(self, rng: random.Random, field: FieldDescriptor):
        self.rng = rng
        self.field = field

    def any(self):
        if self.field.kind == "rational":
            return self.field(self.rng.choice(Q_GRID))
        return FieldElement(self.field, self.rng.randrange(self.field.size))

    def nonzero(self):
        while True:
            x = self.any()
            if x:
                return x

    def distinct(self, n):
        out = []
        while len(out) < n:
            x = self.any()
            if x not in out:
                out.append(x)
        return out

    def avoiding(self, *bad):
        while True:
            x = self.any()
            if x not in bad:
                return x

    def ratio(self, d):
        """A q with q^i != 1 for 1 <= i <= d, when the field has one."""
        if self.field.kind == "rational":
            return self.field(self.rng.choice(Q_RATIOS))
        good = [x for x in self.field.elements() if x and all(x ** i != 1 for i in range(1, d + 1))]
        return self.rng.choice(good) if good else self.nonzero()

    def mode(self, *modes):
        return self.rng.choice(modes)


def _pick_d(rng, cfg: SweepConfig, parity=None):
    lo = max(3, cfg.d_min)
    ds = [d for d in range(lo, max(lo, cfg.d_max) + 1) if parity is None or d % 2 == parity]
    if not ds:
        ds = [lo + (lo % 2 != parity)] if parity is not None else [lo]
    return rng.choice(ds)


def _sample_case_I(g: _Draw, d):
    F = g.field
    q = g.ratio(d)
    eta, mu, h, es, ms, hs = (g.any() for _ in range(6))
    mode = g.mode("free", "h_zero", "bipartite", "dual")
    if mode == "bipartite":
        h, tau = -mu, F.zero
    elif mode == "dual":
        hs, tau = -ms, F.zero
    elif mode == "h_zero":
        den = q ** (d - 1) + 1
        tau = q ** (d - 1) * (h + mu) * (hs + ms) / den if den else g.any()
    else:
        tau = g.any()
    data = CaseIData(F, d, q, eta, mu, h, es, ms, hs, tau)
    return generate_case_I(data), data


def _sample_case_II(g: _Draw, d):
    F = g.field
    eta, mu, h, es, ms, hs = (g.any() for _ in range(6))
    mode = g.mode("free", "h_zero", "bipartite", "dual")
    if mode == "bipartite":
        h, tau = F.zero, F.zero
    elif mode == "dual":
        hs, tau = F.zero, F.zero
    elif mode == "h_zero":
        tau = -h * hs * (d - 1) ** 2 / F(2) if F.characteristic() != 2 else g.any()
    else:
        tau = g.any()
    data = CaseIIData(F, d, eta, mu, h, es, ms, hs, tau)
    return generate_case_II(data), data


def _sample_case_III(g: _Draw, d):
    F = g.field
    eta, s, es, ss = (g.any() for _ in range(4))
    h, hs = g.nonzero(), g.nonzero()
    mode = g.mode("free", "h_zero", "bipartite", "dual")
    if mode == "bipartite":
        s, tau = F.zero, F.zero
    elif mode == "dual":
        ss, tau = F.zero, F.zero
    elif mode == "h_zero" and F(1 - d):
        tau = 2 * s * ss / F(1 - d)
    else:
        tau = g.any()
    data = CaseIIIData(F, d, eta, h, s, es, hs, ss, tau)
    return generate_case_III(data), data


def _sample_case_IV(g: _Draw, d):
    F = g.field
    eta, s, es, ss = (g.any() for _ in range(4))
    h, hs = g.nonzero(), g.nonzero()
    if g.mode("free", "h_zero") == "h_zero" and F.characteristic() != 2:
        tau = -(d * d + 1) * h * hs / F(2)
    else:
        tau = g.any()
    data = CaseIIIData(F, d, eta, h, s, es, hs, ss, tau)
    return generate_case_IV(data), data


def _sample_case_V(g: _Draw):
    F = g.field
    h, hs = g.nonzero(), g.nonzero()
    s, ss = g.avoiding(F.zero, F.one), g.avoiding(F.zero, F.one)
    data = CaseVData(F, g.any(), g.any(), h, s, hs, ss, g.nonzero())
    return generate_case_V(data), data


def _sample_d1(g: _Draw):
    F = g.field
    t, ts = g.distinct(2), g.distinct(2)
    if g.mode("free", "balanced") == "balanced" and F.characteristic() != 2:
        v1 = -(ts[1] - ts[0]) * (t[1] - t[0]) / F(2)
    else:
        v1 = g.nonzero()
    return generate_case0_d1(F, t, ts, v1), None


def _sample_d2(g: _Draw, counter: bool):
    F = g.field
    t, ts = g.distinct(3), g.distinct(3)
    if counter and F.characteristic() != 2 and g.mode("free", "progression") == "progression":
        # eigenvalues in arithmetic progression make the H = 0 array essentially bipartite
        t[2] = 2 * t[1] - t[0]
    H = F.zero if counter else g.any()
    return generate_case0_d2(F, t, ts, H), None


def draw_sample(seed: int, index: int, family: str, field: FieldDescriptor, cfg: SweepConfig):
    """Generate one (array, case data) pair; GeneratorError when the draw is degenerate."""
    rng = random.Random(f"{seed}:{index}")
    g = _Draw(rng, field)
    if family == "d0":
        return generate_case0_d0(field, g.any(), g.any()), None
    if family == "d1":
        return _sample_d1(g)
    if family in ("d2", "d2counter"):
        return _sample_d2(g, family == "d2counter")
    if family == "I":
        return _sample_case_I(g, _pick_d(rng, cfg))
    if family == "II":
        return _sample_case_II(g, _pick_d(rng, cfg))
    if family == "III":
        return _sample_case_III(g, _pick_d(rng, cfg, 0))
    if family == "IV":
        return _sample_case_IV(g, _pick_d(rng, cfg, 1))
    if family == "V":
        return _sample_case_V(g)
    raise ValueError(f"unknown family {family!r}")


@dataclass
class Sample:
    index: int
    family: str
    field: FieldDescriptor
    array: Optional[ParameterArray]
    data: object = None
    error: Optional[str] = None


def iter_samples(cfg: SweepConfig) -> Iterator[Sample]:
    """Every planned sample, valid or not, in index order."""
    for index, (fam, fd) in enumerate(cfg.plan()):
        try:
            pa, data = draw_sample(cfg.seed, index, fam, fd, cfg)
        except (GeneratorError, ZeroDivisionError, FieldError) as exc:
            yield Sample(index, fam, fd, None, error=str(exc))
            continue
        yield Sample(index, fam, fd, pa, data)


def verify_sample(pa: ParameterArray, data, oracle_max_d: int = 8) -> List[str]:
    """Ids of every failed check on one array (empty when all hold)."""
    failed = [e.id for e in check_all(pa, data).failed]
    if pa.d <= oracle_max_d:
        try:
            if oracle_a(pa) != (_compute_a(pa), _compute_a_star(pa)):
                failed.append("matrix_oracle")
        except (MatrixError, AssertionError) as exc:
            failed.append(f"matrix_oracle: {exc}")
    return failed


@dataclass
class SweepSummary:
    attempted: int = 0
    valid: int = 0
    verified: int = 0
    failures: int = 0
    first_failure: Optional[dict] = None
    by_family: Dict[str, Dict[str, int]] = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "attempted": self.attempted,
            "valid": self.valid,
            "verified": self.verified,
            "failures": self.failures,
            "first_failure": self.first_failure,
            "by_family": {k: self.by_family[k] for k in sorted(self.by_family)},
        }


def _run_chunk(args):
    cfg, indices = args
    plan = cfg.plan()
    out = []
    for index in indices:
        fam, fd = plan[index]
        try:
            pa, data = draw_sample(cfg.seed, index, fam, fd, cfg)
        except (GeneratorError, ZeroDivisionError, FieldError):
            out.append((index, fam, False, None))
            continue
        failed = verify_sample(pa, data, cfg.oracle_max_d)
        witness = None
        if failed:
            witness = {"index": index, "family": fam, "array": pa.to_json(), "failed": failed}
        out.append((index, fam, True, witness))
    return out


def sweep(cfg: SweepConfig) -> SweepSummary:
    n = len(cfg.plan())
    if cfg.workers > 1 and n:
        chunks = [(cfg, list(range(w, n, cfg.workers))) for w in range(cfg.workers)]
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = [r for part in pool.map(_run_chunk, chunks) for r in part]
    else:
        results = _run_chunk((cfg, range(n)))

    summary = SweepSummary()
    for fam in cfg.families:
        summary.by_family.setdefault(fam, {"attempted": 0, "valid": 0, "verified": 0})
    for index, fam, valid, witness in sorted(results, key=lambda r: r[0]):
        counts = summary.by_family[fam]
        summary.attempted += 1
        counts["attempted"] += 1
        if not valid:
            continue
        summary.valid += 1
        counts["valid"] += 1
        if witness is None:
            summary.verified += 1
            counts["verified"] += 1
        else:
            summary.failures += 1
            if summary.first_failure is None:
                summary.first_failure = witness
    return summary
