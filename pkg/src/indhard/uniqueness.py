"""Tree recursion of an anti-ferromagnetic 2-spin system, with certified signs.

The one-step map on the (Delta-1)-ary tree is

    T(z) = lam * ((beta*z + 1) / (z + gamma)) ** d,    d = Delta - 1,

and uniqueness of the Gibbs measure corresponds to ``T(T(z)) = z`` having a
single positive solution (the fixed point of ``T``) rather than three.

Everything here is evaluated in Arb ball arithmetic (python-flint). A value
is a ball that provably contains the true real, so a sign is certified once
the ball excludes zero. Evaluations start at ``prec`` bits and double up to
``max_prec`` before giving up with :class:`PrecisionExhausted`. The d-th power
is always taken as ``exp(d * log(ratio))``.

For the gadget spin system (beta = 1, gamma = 1 - 2^-(k-2b), lam = 2^b - 1)
the two functions of interest are ``g(z) = T(z) - z`` and
``f(z) = T(T(z)) - z``; :func:`verify_analytic_lemma` certifies
``f(z*) > 0 > g(z*)`` at ``d = 5 * 2^(k-b)`` and ``z* = 5 * 2^b``.
"""

from __future__ import annotations

import csv
import io
import json
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import flint
from flint import arb

from .errors import BracketFailure, InvalidParameters, PrecisionExhausted
from .spin import check_kb, hypergraph_spin_params

DEFAULT_PREC = 256
MAX_PREC = 4096
DEFAULT_TOL = 1e-12
GRID_POINTS = 64
MAX_REFINEMENTS = 4
MAX_BISECTIONS = 2000
MAX_SCAN_K = 16

UNIQUE = "Unique"
NON_UNIQUE = "NonUnique"
UNDETERMINED = "Undetermined"


@contextmanager
def working_precision(bits: int):
    """Temporarily set the global Arb precision. Not thread-safe."""
    old = flint.ctx.prec
    flint.ctx.prec = bits
    try:
        yield
    finally:
        flint.ctx.prec = old


def as_ball(x) -> arb:
    if isinstance(x, arb):
        return x
    if isinstance(x, Fraction):
        return arb(x.numerator) / arb(x.denominator)
    if isinstance(x, (int, float, str)):
        return arb(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a ball")


def _certify(evaluate: Callable[[], arb], ok: Callable[[arb], bool], prec: int, max_prec: int):
    """Evaluate at increasing precision until ``ok`` accepts the ball.

    Returns ``(ball, bits_used)``.
    """
    bits = prec
    while True:
        with working_precision(bits):
            val = evaluate()
        if ok(val):
            return val, bits
        if bits >= max_prec:
            raise PrecisionExhausted(f"could not certify {val} at {bits} bits")
        bits = min(2 * bits, max_prec)


def _sign_known(v: arb) -> bool:
    return v > 0 or v < 0 or v.is_zero()


def sign(v: arb) -> int:
    return 1 if v > 0 else -1 if v < 0 else 0


@dataclass(frozen=True)
class RecursionParams:
    beta: Fraction
    gamma: Fraction
    lam: Fraction
    d: int

    def __post_init__(self):
        for name in ("beta", "gamma", "lam"):
            val = Fraction(getattr(self, name))
            if val < 0:
                raise InvalidParameters(f"{name} must be non-negative")
            object.__setattr__(self, name, val)
        if self.d < 0:
            raise InvalidParameters("d must be non-negative")
        # beta * gamma = 1 is the boundary where T is constant; allowed for evaluation only
        if self.beta * self.gamma > 1:
            raise InvalidParameters("the recursion needs beta * gamma <= 1")

    @classmethod
    def for_gadget(cls, k: int, b: int, d: int) -> RecursionParams:
        p = hypergraph_spin_params(k, b)
        return cls(p.beta, p.gamma, p.lam, d)


def _tree_map_ball(z: arb, p: RecursionParams) -> arb:
    lam = as_ball(p.lam)
    if p.d == 0:
        return lam
    ratio = (as_ball(p.beta) * z + 1) / (z + as_ball(p.gamma))
    return lam * (p.d * ratio.log()).exp()


def tree_map(z, p: RecursionParams, prec: int = DEFAULT_PREC,
             min_rel_bits: int | None = None, max_prec: int = MAX_PREC) -> arb:
    """``lam * ((beta z + 1)/(z + gamma))^d`` as a ball.

    With ``min_rel_bits`` the precision is raised until the ball carries at
    least that many correct relative bits.
    """
    if not as_ball(z) > 0:
        raise InvalidParameters("tree_map needs z > 0")
    if min_rel_bits is None:
        with working_precision(prec):
            return _tree_map_ball(as_ball(z), p)
    val, _ = _certify(lambda: _tree_map_ball(as_ball(z), p),
                      lambda v: v.rel_accuracy_bits() >= min_rel_bits, prec, max_prec)
    return val


def _g_closed(z: arb, k: int, b: int, d: int) -> arb:
    c = arb(2 ** (k - 2 * b))
    lam = arb(2**b - 1)
    return lam * (d * (1 + 1 / (c * z + c - 1)).log()).exp() - z


def _f_closed(z: arb, k: int, b: int, d: int) -> arb:
    c = arb(2 ** (k - 2 * b))
    lam = arb(2**b - 1)
    inner = (d * (1 + 1 / (c * z + c - 1)).log()).exp()
    return lam * (d * (1 + 1 / (c * lam * inner + c - 1)).log()).exp() - z


def _g_ball(z: arb, k: int, b: int, d: int) -> arb:
    p = RecursionParams.for_gadget(k, b, d)
    val = _tree_map_ball(z, p) - z
    assert val.overlaps(_g_closed(z, k, b, d)), "composed and closed forms of g disagree"
    return val


def _f_ball(z: arb, k: int, b: int, d: int) -> arb:
    p = RecursionParams.for_gadget(k, b, d)
    val = _tree_map_ball(_tree_map_ball(z, p), p) - z
    assert val.overlaps(_f_closed(z, k, b, d)), "composed and closed forms of f disagree"
    return val


def g_fn(z, k: int, b: int, d: int, prec: int = DEFAULT_PREC, max_prec: int = MAX_PREC) -> arb:
    """``T(z) - z`` for the gadget system, with its sign certified."""
    check_kb(k, b)
    val, _ = _certify(lambda: _g_ball(as_ball(z), k, b, d), _sign_known, prec, max_prec)
    return val


def f_fn(z, k: int, b: int, d: int, prec: int = DEFAULT_PREC, max_prec: int = MAX_PREC) -> arb:
    """``T(T(z)) - z`` for the gadget system, with its sign certified."""
    check_kb(k, b)
    val, _ = _certify(lambda: _f_ball(as_ball(z), k, b, d), _sign_known, prec, max_prec)
    return val


@dataclass
class Root:
    """A root enclosed by the bracket ``[lo, hi]`` with a sign change across it."""

    lo: arb
    hi: arb
    mid: arb
    residual: float  # upper bound on |function(mid)|

    @property
    def ball(self) -> arb:
        return arb(self.mid, (self.hi - self.lo).mid() / 2)

    @property
    def width(self) -> float:
        return float((self.hi - self.lo).abs_upper())

    def __float__(self) -> float:
        return float(self.mid)


@dataclass
class FixedPointReport:
    which: str
    params: RecursionParams
    roots: list[Root] = field(default_factory=list)
    regime: str = UNDETERMINED
    q_minus: Root | None = None
    q_times: Root | None = None
    q_plus: Root | None = None
    slope: arb | None = None  # T'(Q_times), certified ball
    precision_bits: int = DEFAULT_PREC
    note: str = ""


class _Evaluator:
    """Certified-sign evaluation of one function, remembering the largest precision used."""

    def __init__(self, fn: Callable[[arb], arb], prec: int, max_prec: int):
        self.fn = fn
        self.prec = prec
        self.max_prec = max_prec
        self.used = prec

    def __call__(self, z: arb) -> arb:
        val, bits = _certify(lambda: self.fn(z), _sign_known, self.prec, self.max_prec)
        self.used = max(self.used, bits)
        return val


def _one_step(p: RecursionParams) -> Callable[[arb], arb]:
    return lambda z: _tree_map_ball(z, p) - z


def _two_step(p: RecursionParams) -> Callable[[arb], arb]:
    return lambda z: _tree_map_ball(_tree_map_ball(z, p), p) - z


def search_interval(p: RecursionParams, prec: int = DEFAULT_PREC) -> tuple[arb, arb]:
    """An interval outside of which T - id and T o T - id have constant sign.

    T is decreasing, so every solution of ``T(T(q)) = q`` lies in
    ``[lo, T(lo)]`` where ``lo`` is ``lam * beta^d`` (the limit of T at
    infinity) or, when that is zero, ``T`` of the limit of T at zero. The
    function is positive below ``lo`` and negative above ``T(lo)``.
    """
    if p.lam == 0:
        raise InvalidParameters("lam = 0 makes the recursion degenerate")
    with working_precision(prec):
        if p.beta > 0:
            lo = as_ball(p.lam) * as_ball(p.beta) ** p.d
        elif p.gamma > 0:
            lo = _tree_map_ball(as_ball(p.lam) / as_ball(p.gamma) ** p.d, p)
        else:
            raise InvalidParameters("beta and gamma cannot both be zero")
        hi = _tree_map_ball(lo, p)
        return (lo.lower() / 2).mid(), (2 * hi.upper() + 1).mid()


def _geometric_grid(lo: arb, hi: arb, points: int) -> list[arb]:
    ratio = (hi / lo).log() / (points - 1)
    pts = [lo] + [(lo * (i * ratio).exp()).mid() for i in range(1, points - 1)] + [hi]
    return pts


def _bisect(ev: _Evaluator, lo: arb, hi: arb, s_lo: int, tol: float,
            image: Callable[[arb], arb] | None = None) -> Root:
    """Shrink a sign-change bracket until it is narrower than ``tol``, the
    residual is below ``tol`` and, if ``image`` is given, the image of the
    bracket is narrower than ``tol`` as well."""

    def image_ok(a: arb, b: arb) -> bool:
        return image is None or float((image(b) - image(a)).abs_upper()) <= tol

    for _ in range(MAX_BISECTIONS):
        mid = ((lo + hi) / 2).mid()
        val = ev(mid)
        s = sign(val)
        if s == 0:
            return Root(mid, mid, mid, 0.0)
        width = float((hi - lo).abs_upper())
        if width <= tol and float(val.abs_upper()) <= tol and image_ok(lo, hi):
            return Root(lo, hi, mid, float(val.abs_upper()))
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    val = ev(mid)
    return Root(lo, hi, mid, float(val.abs_upper()))


def _scan(ev: _Evaluator, points: list[arb], tol: float,
          image: Callable[[arb], arb] | None = None) -> list[Root]:
    signs = []
    roots = []
    for z in points:
        s = sign(ev(z))
        if s == 0:
            roots.append(Root(z, z, z, 0.0))
        signs.append(s)
    nonzero = [(z, s) for z, s in zip(points, signs) if s != 0]
    for (a, sa), (b, sb) in zip(nonzero, nonzero[1:]):
        if sa != sb and not any(r.lo == r.hi and a < r.mid < b for r in roots):
            roots.append(_bisect(ev, a, b, sa, tol, image))
    roots.sort(key=lambda r: float(r.mid))
    return roots


def _slope_at(q: Root, p: RecursionParams, prec: int) -> arb:
    """Ball for T'(q) over the whole bracket of q."""
    with working_precision(prec):
        z = q.ball
        beta, gamma = as_ball(p.beta), as_ball(p.gamma)
        return p.d * _tree_map_ball(z, p) * (beta * gamma - 1) / ((beta * z + 1) * (z + gamma))


def find_fixed_points(
    p: RecursionParams,
    which: str = "f",
    search_max=None,
    tol: float = DEFAULT_TOL,
    prec: int = DEFAULT_PREC,
    max_prec: int = MAX_PREC,
) -> FixedPointReport:
    """Locate all positive roots of ``T - id`` (``which="g"``) or ``T o T - id`` (``"f"``).

    A geometric grid is scanned for certified sign changes and each bracket
    is bisected until it is narrower than ``tol`` and the residual is below
    ``tol``. For ``"f"`` the fixed point of T is located first and its bracket
    is added to the grid. Whenever ``|T'(Q_times)| > 1`` the two-step map
    must have roots on both sides of ``Q_times``; the grid is refined until
    those are found or :class:`BracketFailure` is raised.
    """
    if which not in ("f", "g"):
        raise InvalidParameters("which must be 'f' or 'g'")
    if tol <= 0:
        raise InvalidParameters("tol must be positive")
    if not p.beta * p.gamma < 1:
        raise InvalidParameters("root finding needs an anti-ferromagnetic system, beta * gamma < 1")
    # Grid points and bisection midpoints are formed at the working precision.
    with working_precision(prec):
        return _find_fixed_points(p, which, search_max, tol, prec, max_prec)


def _find_fixed_points(p, which, search_max, tol, prec, max_prec) -> FixedPointReport:
    lo, hi = search_interval(p, prec)
    if search_max is not None:
        hi = as_ball(search_max).mid()
    if not hi > lo:
        raise InvalidParameters("search_max must exceed the lower end of the search interval")

    g_ev = _Evaluator(_one_step(p), prec, max_prec)
    g_roots = _scan(g_ev, _geometric_grid(lo, hi, GRID_POINTS), tol)
    if len(g_roots) != 1:
        raise BracketFailure(f"expected one fixed point of T, found {len(g_roots)}")
    q_times = g_roots[0]
    report = FixedPointReport(which=which, params=p, precision_bits=g_ev.used)
    if which == "g":
        report.roots = g_roots
        report.q_times = q_times
        report.regime = UNIQUE
        return report

    slope = _slope_at(q_times, p, max(prec, g_ev.used))
    report.slope = slope
    expect_three = bool(abs(slope) > 1)
    tangent = not (abs(slope) > 1 or abs(slope) < 1)

    f_ev = _Evaluator(_two_step(p), prec, max_prec)
    points = GRID_POINTS
    for _ in range(MAX_REFINEMENTS + 1):
        grid = _geometric_grid(lo, hi, points)
        extra = [q_times.lo, q_times.hi] if q_times.lo != q_times.hi else [q_times.mid]
        grid = _merge(grid, extra)
        roots = _scan(f_ev, grid, tol, image=lambda z: _tree_map_ball(z, p))
        if not expect_three or len(roots) >= 3:
            break
        points *= 4
    else:
        raise BracketFailure(
            f"|T'(Q_times)| > 1 but only {len(roots)} roots found after refinement"
        )
    report.roots = roots
    report.precision_bits = max(g_ev.used, f_ev.used)

    def _near(r: Root) -> bool:
        return abs(float(r.mid) - float(q_times.mid)) <= max(2 * tol, r.width + q_times.width)

    middle = [r for r in roots if _near(r)]
    if tangent:
        report.regime = UNDETERMINED
        report.note = "T'(Q_times) is not certified away from -1 (tangency)"
    elif len(roots) == 3 and expect_three and middle == [roots[1]]:
        report.regime = NON_UNIQUE
        report.q_minus, report.q_times, report.q_plus = roots
    elif len(roots) == 1 and not expect_three and middle == roots:
        report.regime = UNIQUE
        report.q_times = roots[0]
    else:
        report.regime = UNDETERMINED
        report.note = f"{len(roots)} roots found, structure not recognised"
    return report


def _merge(grid: list[arb], extra: list[arb]) -> list[arb]:
    out = [z for z in grid if all(not z == e for e in extra)] + list(extra)
    out.sort(key=lambda z: (float(z), z.mid().str(60, radius=False)))
    return out


def find_roots(which: str, k: int, b: int, d: int, search_max=None,
               tol: float = DEFAULT_TOL, prec: int = DEFAULT_PREC,
               max_prec: int = MAX_PREC) -> FixedPointReport:
    check_kb(k, b)
    p = RecursionParams.for_gadget(k, b, d)
    return find_fixed_points(p, which, search_max, tol, prec, max_prec)


def classify(k: int, b: int, delta: int, tol: float = DEFAULT_TOL,
             prec: int = DEFAULT_PREC, max_prec: int = MAX_PREC) -> FixedPointReport:
    """Uniqueness regime of the gadget spin system on the (delta-1)-ary tree."""
    if delta < 3:
        raise InvalidParameters("classification needs delta >= 3")
    return find_roots("f", k, b, delta - 1, tol=tol, prec=prec, max_prec=max_prec)


def h_fn(b: int, prec: int = DEFAULT_PREC) -> arb:
    """``(2^b - 1) exp(5 * 2^b / (2 + (2^b - 1) e)) - 5 * 2^b``."""
    if b < 2:
        raise InvalidParameters("h is defined for b >= 2")
    with working_precision(prec):
        lam = arb(2**b - 1)
        return lam * (arb(5 * 2**b) / (2 + lam * arb.const_e())).exp() - 5 * 2**b


def f_star_lower_bound(k: int, b: int, prec: int = DEFAULT_PREC) -> arb:
    """Closed-form lower bound on f(z*), valid for k >= 3:
    ``(2^b - 1) exp(5 * 2^(b+k) / (2^k + 2^(2b) + 2^k (2^b - 1) e)) - 5 * 2^b``."""
    check_kb(k, b)
    if k < 3:
        raise InvalidParameters("the bound is stated for k >= 3")
    with working_precision(prec):
        lam = arb(2**b - 1)
        denom = arb(2**k + 2 ** (2 * b)) + arb(2**k) * lam * arb.const_e()
        return lam * (arb(5 * 2 ** (b + k)) / denom).exp() - 5 * 2**b


@dataclass
class LemmaCheck:
    k: int
    b: int
    d: int
    z_star: int
    f_value: arb
    g_value: arb
    precision_bits: int
    lower_bound: arb | None = None

    @property
    def passed(self) -> bool:
        return bool(self.f_value > 0 and self.g_value < 0)

    @property
    def bound_respected(self) -> bool | None:
        if self.lower_bound is None:
            return None
        return bool(self.f_value > self.lower_bound)


def verify_analytic_lemma(k: int, b: int, prec: int = DEFAULT_PREC,
                          max_prec: int = MAX_PREC) -> LemmaCheck:
    """Certify ``f(z*) > 0`` and ``g(z*) < 0`` at ``d = 5 * 2^(k-b)``, ``z* = 5 * 2^b``."""
    check_kb(k, b)
    d = 5 * 2 ** (k - b)
    z_star = 5 * 2**b
    assert Fraction(d, 2 ** (k - 2 * b)) == z_star
    z = arb(z_star)
    f_val, f_bits = _certify(lambda: _f_ball(z, k, b, d), _sign_known, prec, max_prec)
    g_val, g_bits = _certify(lambda: _g_ball(z, k, b, d), _sign_known, prec, max_prec)
    bound = f_star_lower_bound(k, b, prec) if k >= 3 else None
    return LemmaCheck(k, b, d, z_star, f_val, g_val, max(f_bits, g_bits), bound)


def exp_sandwich_check(x, y, prec: int = DEFAULT_PREC, max_prec: int = MAX_PREC) -> bool:
    """Certify ``exp(x) > (1 + x/y)^y > exp(xy/(x+y))`` for ``x, y > 0``.

    Returns False only if one of the inequalities is certified to fail.
    """
    xb, yb = as_ball(x), as_ball(y)
    if not (xb > 0 and yb > 0):
        raise InvalidParameters("x and y must be positive")

    def gaps():
        mid = (yb * (1 + xb / yb).log()).exp()
        return xb.exp() - mid, mid - (xb * yb / (xb + yb)).exp()

    bits = prec
    while True:
        with working_precision(bits):
            upper, lower = gaps()
        if upper < 0 or lower < 0 or upper.is_zero() or lower.is_zero():
            return False
        if upper > 0 and lower > 0:
            return True
        if bits >= max_prec:
            raise PrecisionExhausted(f"sandwich at x={x}, y={y} undecided at {bits} bits")
        bits = min(2 * bits, max_prec)


@dataclass
class ScanRow:
    k: int
    b: int
    delta: int
    d: int
    regime: str
    q_minus: float | None
    q_times: float | None
    q_plus: float | None
    threshold_paper: int
    threshold_hypertree: float
    precision_bits: int

    FIELDS = ("k", "b", "delta", "d", "regime", "q_minus", "q_times", "q_plus",
              "threshold_paper", "threshold_hypertree", "precision_bits")

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.FIELDS}


def hardness_threshold(k: int, b: int) -> int:
    return 5 * 2 ** (k - b) + 1


def hypertree_threshold(k: int) -> Fraction:
    return Fraction(2**k, 2 * k)


def regime_scan(
    ks: Iterable[int],
    b: int,
    deltas: Iterable[int] | Callable[[int], Iterable[int]],
    tol: float = DEFAULT_TOL,
    prec: int = DEFAULT_PREC,
    max_prec: int = MAX_PREC,
    max_k: int = MAX_SCAN_K,
) -> list[ScanRow]:
    """Classify every ``(k, delta)`` pair.

    ``deltas`` is either a fixed iterable or a function of ``k``. Values of
    ``k`` with ``2b > k`` are skipped. Rows whose certification runs out of
    precision or brackets are kept and marked Undetermined.
    """
    rows = []
    for k in ks:
        if k > max_k:
            raise InvalidParameters(f"k={k} exceeds the scan cap of {max_k}")
        if 2 * b > k:
            continue
        ds = deltas(k) if callable(deltas) else deltas
        for delta in ds:
            try:
                rep = classify(k, b, delta, tol, prec, max_prec)
                regime, bits = rep.regime, rep.precision_bits
            except (PrecisionExhausted, BracketFailure):
                rep, regime, bits = None, UNDETERMINED, max_prec

            def val(name):
                r = getattr(rep, name) if rep is not None else None
                return None if r is None else float(r.mid)

            rows.append(ScanRow(
                k=k, b=b, delta=delta, d=delta - 1, regime=regime,
                q_minus=val("q_minus"), q_times=val("q_times"), q_plus=val("q_plus"),
                threshold_paper=hardness_threshold(k, b),
                threshold_hypertree=float(hypertree_threshold(k)),
                precision_bits=bits,
            ))
    return rows


def rows_to_csv(rows: list[ScanRow]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=ScanRow.FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: ("" if v is None else repr(v) if isinstance(v, float) else v)
                         for k, v in r.as_dict().items()})
    return buf.getvalue()


def rows_to_json(rows: list[ScanRow]) -> str:
    return json.dumps([r.as_dict() for r in rows], indent=2)
