"""Balanced / essentially bipartite predicates and per-array theorem checks.

Every equivalence is evaluated as a biconditional on the given array: both
sides are computed and compared.  A ``False`` entry in a
:class:`TheoremReport` means an implementation or transcription bug, never
an expected outcome.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, List, Optional, Tuple

from .array import (
    AnalysisReport,
    ParameterArray,
    _compute_a,
    _compute_a_second,
    _compute_a_star,
    _h_pair,
    classify_case,
    require_valid,
    reverse_theta,
    validate,
)
from .families import CaseIData, CaseIIData, CaseIIIData, CaseVData
from .fields import FieldElement

__all__ = [
    "TheoremEntry",
    "TheoremReport",
    "is_balanced",
    "is_essentially_bipartite",
    "is_essentially_dual_bipartite",
    "analyze",
    "check_all",
]


@dataclass(frozen=True)
class TheoremEntry:
    id: str
    holds: bool
    skipped: bool = False
    detail: Optional[str] = None

    def to_json(self) -> dict:
        return {"id": self.id, "holds": self.holds, "skipped": self.skipped, "detail": self.detail}


@dataclass
class TheoremReport:
    entries: List[TheoremEntry] = dc_field(default_factory=list)

    @property
    def all_hold(self) -> bool:
        return all(e.holds for e in self.entries)

    @property
    def failed(self) -> List[TheoremEntry]:
        return [e for e in self.entries if not e.holds]

    def __getitem__(self, key: str) -> TheoremEntry:
        for e in self.entries:
            if e.id == key:
                return e
        raise KeyError(key)

    def ids(self) -> List[str]:
        return [e.id for e in self.entries]

    def to_json(self) -> dict:
        return {"all_hold": self.all_hold, "entries": [e.to_json() for e in self.entries]}


def _palindrome(seq) -> bool:
    d = len(seq) - 1
    return all(seq[i] == seq[d - i] for i in range(d + 1))


def _constant(seq) -> Tuple[bool, Optional[FieldElement]]:
    if all(x == seq[0] for x in seq):
        return True, seq[0]
    return False, None


def _mirror_sums(seq):
    d = len(seq) - 1
    return [seq[i] + seq[d - i] for i in range(d + 1)]


def _bipartite_check(a, theta, varphi, partner):
    """Constancy of ``a`` against the eigenvalue/split-sequence criterion.

    ``partner[i]`` is the second-split entry that must equal -varphi[i].
    Returns (flag, xi, consistent, detail).
    """
    flag, xi = _constant(a)
    sums_const, common = _constant(_mirror_sums(theta))
    negated = all(v == -p for v, p in zip(varphi, partner))
    criterion = sums_const and negated
    if flag != criterion:
        return flag, xi, False, f"a constant={flag} but criterion={criterion}"
    if flag and common != 2 * xi:
        return flag, xi, False, f"mirror sum {common} != 2*{xi}"
    return flag, xi, True, None


def _eb(pa, a):
    return _bipartite_check(a, pa.theta, pa.varphi, pa.phi)


def _edb(pa, a_star):
    return _bipartite_check(a_star, pa.theta_star, pa.varphi, pa.phi[::-1])


def is_balanced(pa: ParameterArray) -> bool:
    require_valid(pa)
    return _palindrome(_compute_a(pa)) and _palindrome(_compute_a_star(pa))


def is_essentially_bipartite(pa: ParameterArray) -> Tuple[bool, Optional[FieldElement]]:
    """(True, xi) when every a_i equals xi, else (False, None).

    Also confirms that constancy coincides with the criterion "theta_i +
    theta_{d-i} constant and varphi_i = -phi_i" and that the constant sum is
    2*xi; a mismatch raises AssertionError.
    """
    require_valid(pa)
    flag, xi, ok, detail = _eb(pa, _compute_a(pa))
    if not ok:
        raise AssertionError(detail)
    return flag, xi


def is_essentially_dual_bipartite(pa: ParameterArray) -> Tuple[bool, Optional[FieldElement]]:
    """Starred counterpart of :func:`is_essentially_bipartite`; the split
    criterion pairs varphi_i with phi_{d-i+1}."""
    require_valid(pa)
    flag, xi, ok, detail = _edb(pa, _compute_a_star(pa))
    if not ok:
        raise AssertionError(detail)
    return flag, xi


def analyze(pa: ParameterArray) -> AnalysisReport:
    require_valid(pa)
    a, a_star = _compute_a(pa), _compute_a_star(pa)
    H = None
    if pa.d >= 1:
        left, right = _h_pair(pa, a, a_star)
        if left != right:
            raise AssertionError(f"H expressions disagree: {left} != {right}")
        H = left
    eb, xi, ok, detail = _eb(pa, a)
    if not ok:
        raise AssertionError(detail)
    edb, xi_star, ok, detail = _edb(pa, a_star)
    if not ok:
        raise AssertionError(detail)
    return AnalysisReport(
        a=a,
        a_star=a_star,
        H=H,
        case=classify_case(pa),
        balanced=_palindrome(a) and _palindrome(a_star),
        essentially_bipartite=eb,
        xi=xi,
        essentially_dual_bipartite=edb,
        xi_star=xi_star,
    )


class _Recorder:
    def __init__(self):
        self.entries: List[TheoremEntry] = []

    def check(self, id: str, fn: Callable[[], object]):
        """Run ``fn``; it returns True, False, a (bool, detail) pair, or None to skip."""
        try:
            res = fn()
        except (ArithmeticError, AssertionError, ValueError) as exc:
            self.entries.append(TheoremEntry(id, False, detail=f"{type(exc).__name__}: {exc}"))
            return
        if res is None:
            self.entries.append(TheoremEntry(id, True, skipped=True))
            return
        if isinstance(res, tuple):
            holds, detail = res
        else:
            holds, detail = bool(res), None
        self.entries.append(TheoremEntry(id, bool(holds), detail=None if holds else detail))


def _s(*xs) -> str:
    return ", ".join(str(x) for x in xs)


def check_all(pa: ParameterArray, case_data=None) -> TheoremReport:
    """Evaluate every identity and equivalence that applies to ``pa``.

    ``case_data`` is the family parameter record a generator was called
    with; when given, the case-specific closed forms are checked as well.
    """
    require_valid(pa)
    d = pa.d
    th, ts, vp = pa.theta, pa.theta_star, pa.varphi
    a, a_s = _compute_a(pa), _compute_a_star(pa)
    rec = _Recorder()
    c = rec.check

    c("endpoints_dual", lambda: ((a[0] == a[d]) == (a_s[0] == a_s[d]), _s(a[0], a[d], a_s[0], a_s[d])))

    if d >= 1:
        H, H2 = _h_pair(pa, a, a_s)
        c("h_two_expressions", lambda: (H == H2, _s(H, H2)))
        c("h_zero_iff_endpoints", lambda: ((not H) == (a[0] == a[d]), _s(H, a[0], a[d])))

        def three_way():
            i = a[0] == a[d] and a[1] == a[d - 1]
            ii = a_s[0] == a_s[d] and a_s[1] == a_s[d - 1]
            iii = _palindrome(a) and _palindrome(a_s)
            return i == ii == iii, f"(i)={i} (ii)={ii} (iii)={iii}"

        c("balanced_three_way", three_way)
    else:
        H = None

    eb, xi, eb_ok, eb_detail = _eb(pa, a)
    edb, xis, edb_ok, edb_detail = _edb(pa, a_s)
    balanced = _palindrome(a) and _palindrome(a_s)
    c("essentially_bipartite_criterion", lambda: (eb_ok, eb_detail))
    c("essentially_dual_bipartite_criterion", lambda: (edb_ok, edb_detail))
    c("bipartite_implies_balanced", lambda: (not (eb or edb) or balanced, f"eb={eb} edb={edb}"))
    c(
        "balanced_implies_bipartite",
        lambda: None if d == 2 else (not balanced or eb or edb, f"balanced but eb={eb} edb={edb}"),
    )

    if d >= 1:
        def ratio():
            for i in range(d + 1):
                if (th[i] - th[d - i]) * (ts[0] - ts[d]) != (ts[i] - ts[d - i]) * (th[0] - th[d]):
                    return False, f"i={i}"
            return True

        c("eigenvalue_ratio", ratio)

        def endpoints():
            v1 = vp[0]
            a0 = th[0] + v1 / (ts[0] - ts[1])
            ad = (th[1] * (ts[0] - ts[d]) - th[0] * (ts[0] - ts[d - 1])) / (ts[d - 1] - ts[d]) - v1 / (ts[d - 1] - ts[d])
            as0 = ts[0] + v1 / (th[0] - th[1])
            asd = (ts[1] * (th[0] - th[d]) - ts[0] * (th[0] - th[d - 1])) / (th[d - 1] - th[d]) - v1 / (th[d - 1] - th[d])
            got = (a0, ad, as0, asd)
            want = (a[0], a[d], a_s[0], a_s[d])
            return got == want, f"closed {_s(*got)} vs {_s(*want)}"

        c("endpoint_closed_forms", endpoints)

        def differences():
            v1 = vp[0]
            dd = (th[0] - th[1]) * (ts[0] - ts[d]) / (ts[d - 1] - ts[d]) + v1 / (ts[0] - ts[1]) + v1 / (ts[d - 1] - ts[d])
            dds = (ts[0] - ts[1]) * (th[0] - th[d]) / (th[d - 1] - th[d]) + v1 / (th[0] - th[1]) + v1 / (th[d - 1] - th[d])
            return (dd == a[0] - a[d] and dds == a_s[0] - a_s[d]), _s(dd, dds)

        c("endpoint_difference_forms", differences)

    def second_split():
        a2, as2 = _compute_a_second(pa)
        return (a2 == a and as2 == a_s), f"{_s(*a2)} / {_s(*as2)}"

    c("second_split_agreement", second_split)

    def reversal():
        rev = reverse_theta(pa)
        return validate(rev).valid and reverse_theta(rev) == pa

    c("reverse_theta_involution", reversal)

    tag = classify_case(pa).tag
    if tag == "Case0":
        _case0_suite(c, pa, a, a_s, H)
    elif tag == "CaseIV":
        _case4_free_suite(c, pa, a, a_s)
    elif tag == "CaseV":
        _case5_free_suite(c, pa, a, a_s)

    if case_data is not None:
        _case_data_suite(c, pa, tag, a, a_s, H, (eb, xi), (edb, xis), balanced, case_data)
    return TheoremReport(rec.entries)


def _case0_suite(c, pa, a, a_s, H):
    d, th, ts, vp, ph = pa.d, pa.theta, pa.theta_star, pa.varphi, pa.phi
    if d == 1:
        def d1():
            diff = (vp[0] + ph[0]) / (ts[0] - ts[1])
            return (a[0] - a[1] == diff and a[0] + a[1] == th[0] + th[1]), _s(a[0], a[1], diff)

        c("case0_d1_forms", d1)
    elif d == 2:
        def d2():
            want = (
                H - (th[0] - th[1]) * (ts[0] - ts[1]),
                H - (th[1] - th[2]) * (ts[1] - ts[2]),
                H + (th[1] - th[2]) * (ts[0] - ts[1]),
                H + (th[0] - th[1]) * (ts[1] - ts[2]),
            )
            return want == tuple(vp) + tuple(ph), _s(*want)

        c("case0_d2_split_forms", d2)
        c(
            "case0_d2_h_zero_step",
            lambda: None if H else (a[1] - a[0] == th[0] - 2 * th[1] + th[2], _s(a[0], a[1])),
        )


def _case4_free_suite(c, pa, a, a_s):
    d, vp, ph = pa.d, pa.varphi, pa.phi
    c("case4_parity", lambda: d % 2 == 1)
    c(
        "case4_no_balance",
        lambda: None if a[0] != a[d] else (a[1] != a[d - 1] and a_s[1] != a_s[d - 1], _s(*a)),
    )

    def sums():
        s1, s2 = vp[1] + ph[1], vp[1] + ph[d - 2]
        return (bool(s1) and s1 == s2), _s(s1, s2)

    c("case4_split_sums_nonzero", sums)


def _case5_free_suite(c, pa, a, a_s):
    d, vp, ph = pa.d, pa.varphi, pa.phi
    c("case5_diameter", lambda: (d == 3, f"char 2, beta = 0 array with d={d}"))
    if d != 3:
        return
    c("case5_endpoints_differ", lambda: (a[0] != a[3] and a_s[0] != a_s[3], _s(*a, *a_s)))
    c("case5_split_sums_nonzero", lambda: (bool(vp[0] + ph[0]) and bool(vp[0] + ph[2])))


def _second_pair(pa, a, a_s):
    d, th, ts = pa.d, pa.theta, pa.theta_star
    left = (a[1] - a[d - 1]) * (ts[0] - ts[3]) * (ts[d - 3] - ts[d]) / (ts[0] - ts[d])
    right = (a_s[1] - a_s[d - 1]) * (th[0] - th[3]) * (th[d - 3] - th[d]) / (th[0] - th[d])
    return left, right


def _equiv(*flags) -> bool:
    return all(f == flags[0] for f in flags)


def _case_data_suite(c, pa, tag, a, a_s, H, ebp, edbp, balanced, data):
    d, F = pa.d, pa.field
    th, ts, vp, ph = pa.theta, pa.theta_star, pa.varphi, pa.phi
    eb, xi = ebp
    edb, xis = edbp
    endpoint_pair = a[1] == a[d - 1] if d >= 1 else True
    endpoint_pair_s = a_s[1] == a_s[d - 1] if d >= 1 else True

    if isinstance(data, CaseIData):
        q, eta, mu, h = data.q, data.eta, data.mu, data.h
        es, ms, hs, tau = data.eta_star, data.mu_star, data.h_star, data.tau
        c("case1_label", lambda: (tag == "CaseI", tag))
        c("case1_beta", lambda: classify_case(pa).beta == q + q.inverse())
        c(
            "case1_h_closed_form",
            lambda: (H == (q - 1) ** 2 * ((q ** (d - 1) + 1) * tau - q ** (d - 1) * (h + mu) * (hs + ms)), _s(H)),
        )

        def tau_at_h_zero():
            if H:
                return None
            den = q ** (d - 1) + 1
            return bool(den) and tau == q ** (d - 1) * (h + mu) * (hs + ms) / den

        c("case1_h_zero_tau", tau_at_h_zero)

        def pair():
            if H:
                return None
            left, right = _second_pair(pa, a, a_s)
            closed = (1 - q ** 2) * (q ** 3 - 1) ** 2 * (q ** (d - 1) - 1) * (q ** (d - 2) - 1) * tau / (q ** 2 * (q ** d - 1))
            return (left == right == closed), _s(left, right, closed)

        c("case1_second_pair", pair)
        c(
            "case1_h_zero_equivalences",
            lambda: None if H else _equiv(endpoint_pair, endpoint_pair_s, not ((h + mu) * (hs + ms)), not tau),
        )
        c("case1_balanced_criterion", lambda: balanced == (not tau and not ((h + mu) * (hs + ms))))

        def sums():
            for i in range(d + 1):
                g = q ** i + q ** (d - i)
                if th[i] + th[d - i] != 2 * eta + (h + mu) * g or ts[i] + ts[d - i] != 2 * es + (hs + ms) * g:
                    return False, f"i={i}"
            return True

        c("case1_mirror_sums", sums)

        def split_sums():
            for i in range(1, d + 1):
                k = (q ** i - 1) * (q ** (d - i + 1) - 1)
                s1 = k * (2 * tau - (h + mu) * (ms * q ** (i - 1) + hs * q ** (d - i)))
                s2 = k * (2 * tau - (hs + ms) * (mu * q ** (i - 1) + h * q ** (d - i)))
                if vp[i - 1] + ph[i - 1] != s1 or vp[i - 1] + ph[d - i] != s2:
                    return False, f"i={i}"
            return True

        c("case1_split_sums", split_sums)

        def first_step():
            out = []
            k = q ** (d - 2) * (q - 1) * (q ** 2 - 1) ** 2 * (q ** (d - 1) - 1)
            if not tau and not (hs + ms):
                out.append(a[1] - a[0] == k * ms ** 2 * (h + mu) / ((ts[0] - ts[1]) * (ts[1] - ts[2])))
            if not tau and not (h + mu):
                out.append(a_s[1] - a_s[0] == k * mu ** 2 * (hs + ms) / ((th[0] - th[1]) * (th[1] - th[2])))
            return all(out) if out else None

        c("case1_first_step", first_step)
        c("case1_bipartite_criterion", lambda: (eb == (not tau and not (h + mu))) and (not eb or xi == eta))
        c("case1_dual_bipartite_criterion", lambda: (edb == (not tau and not (hs + ms))) and (not edb or xis == es))

    elif isinstance(data, CaseIIData):
        eta, mu, h = data.eta, data.mu, data.h
        es, ms, hs, tau = data.eta_star, data.mu_star, data.h_star, data.tau
        c("case2_label", lambda: (tag == "CaseII", tag))
        c("case2_h_closed_form", lambda: (H == 2 * tau + h * hs * (d - 1) ** 2, _s(H)))
        c("case2_h_zero_tau", lambda: None if H else tau == -h * hs * (d - 1) ** 2 / F(2))

        def pair():
            if H:
                return None
            left, right = _second_pair(pa, a, a_s)
            closed = -36 * F(d - 1) * (d - 2) * h * hs / F(d)
            return (left == right == closed), _s(left, right, closed)

        c("case2_second_pair", pair)
        c(
            "case2_h_zero_equivalences",
            lambda: None if H else _equiv(endpoint_pair, endpoint_pair_s, not (h * hs), not tau),
        )
        c("case2_balanced_criterion", lambda: balanced == (not (h * hs) and not tau))

        def sums():
            for i in range(d + 1):
                if th[i] + th[d - i] != 2 * (eta + h * (i * (d - i))) or ts[i] + ts[d - i] != 2 * (es + hs * (i * (d - i))):
                    return False, f"i={i}"
            return True

        c("case2_mirror_sums", sums)

        def split_sums():
            for i in range(1, d + 1):
                k = F(i * (d - i + 1))
                tail = 2 * h * hs * ((d - i) * (i - 1))
                s1 = k * (2 * tau - (d - 2 * i + 1) * h * ms + tail)
                s2 = k * (2 * tau - (d - 2 * i + 1) * hs * mu + tail)
                if vp[i - 1] + ph[i - 1] != s1 or vp[i - 1] + ph[d - i] != s2:
                    return False, f"i={i}"
            return True

        c("case2_split_sums", split_sums)

        def first_step():
            out = []
            if not tau and not hs:
                out.append(a[0] - a[1] == 2 * (d - 1) * h)
            if not tau and not h:
                out.append(a_s[0] - a_s[1] == 2 * (d - 1) * hs)
            return all(out) if out else None

        c("case2_first_step", first_step)
        c("case2_bipartite_criterion", lambda: (eb == (not h and not tau)) and (not eb or xi == eta))
        c("case2_dual_bipartite_criterion", lambda: (edb == (not hs and not tau)) and (not edb or xis == es))

    elif isinstance(data, CaseIIIData) and d % 2 == 0:
        eta, h, s = data.eta, data.h, data.s
        es, hs, ss, tau = data.eta_star, data.h_star, data.s_star, data.tau
        c("case3_label", lambda: (tag == "CaseIII", tag))
        c("case3_h_closed_form", lambda: (H == 2 * (d - 1) * tau + 4 * s * ss, _s(H)))
        c("case3_h_zero_tau", lambda: None if H else (F(d - 1) != 0 and tau == 2 * s * ss / F(1 - d)))

        def pair():
            if H:
                return None
            left, right = _second_pair(pa, a, a_s)
            closed = 16 * F(d - 2) * s * ss / F(d * (d - 1))
            return (left == right == closed), _s(left, right, closed)

        c("case3_second_pair", pair)
        c(
            "case3_h_zero_equivalences",
            lambda: None if H else _equiv(endpoint_pair, endpoint_pair_s, not (s * ss), not tau),
        )
        c("case3_balanced_criterion", lambda: balanced == (not (s * ss) and not tau))

        def sums():
            for i in range(d + 1):
                sign = 1 if i % 2 == 0 else -1
                if th[i] + th[d - i] != 2 * (eta + sign * s) or ts[i] + ts[d - i] != 2 * (es + sign * ss):
                    return False, f"i={i}"
            return True

        c("case3_mirror_sums", sums)

        def split_sums():
            for i in range(1, d + 1):
                if i % 2 == 0:
                    s1, s2 = 2 * i * (tau - s * hs), 2 * i * (tau - ss * h)
                else:
                    s1, s2 = 2 * (d - i + 1) * (tau + s * hs), 2 * (d - i + 1) * (tau + ss * h)
                if vp[i - 1] + ph[i - 1] != s1 or vp[i - 1] + ph[d - i] != s2:
                    return False, f"i={i}"
            return True

        c("case3_split_sums", split_sums)

        def first_step():
            out = []
            den = F((d - 1) * (d - 3))
            if not tau and not ss:
                out.append(bool(den) and a[0] - a[1] == 4 * s / den)
            if not tau and not s:
                out.append(bool(den) and a_s[0] - a_s[1] == 4 * ss / den)
            return all(out) if out else None

        c("case3_first_step", first_step)
        c("case3_bipartite_criterion", lambda: (eb == (not s and not tau)) and (not eb or xi == eta))
        c("case3_dual_bipartite_criterion", lambda: (edb == (not ss and not tau)) and (not edb or xis == es))

    elif isinstance(data, CaseIIIData):
        h, s, hs, ss, tau = data.h, data.s, data.h_star, data.s_star, data.tau
        c("case4_label", lambda: (tag == "CaseIV", tag))
        c("case4_h_closed_form", lambda: (H == 2 * tau + (d * d + 1) * h * hs, _s(H)))
        c("case4_h_zero_tau", lambda: None if H else tau == -(d * d + 1) * h * hs / F(2))

        def pair():
            if H:
                return None
            left, right = _second_pair(pa, a, a_s)
            closed = -4 * (d - 1) * h * hs
            return (left == right == closed), _s(left, right, closed)

        c("case4_second_pair", pair)
        c(
            "case4_split_sum_value",
            lambda: vp[1] + ph[1] == vp[1] + ph[d - 2] == 4 * (d - 1) * h * hs,
        )

    elif isinstance(data, CaseVData):
        h, s, hs, ss = data.h, data.s, data.h_star, data.s_star
        c("case5_label", lambda: (tag == "CaseV", tag))
        c(
            "case5_endpoint_forms",
            lambda: (a[0] - a[3] == h * ss * (1 + s) / (1 + ss) and a_s[0] - a_s[3] == hs * s * (1 + ss) / (1 + s)),
        )
        c(
            "case5_split_sum_values",
            lambda: vp[0] + ph[0] == h * hs * s * (1 + ss) and vp[0] + ph[2] == h * hs * ss * (1 + s),
        )
