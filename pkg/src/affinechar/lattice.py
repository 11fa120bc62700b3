"""Exact lattice-point enumeration and alternating Weyl-translated sums.

The drop of a translation t_gamma applied to a weight of shifted level c is
the positive definite quadratic (nu|gamma) + c(gamma|gamma)/2; enumerating
all gamma below a bound is an ellipsoid problem solved exactly over Q.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from math import gcd

from .rootdata import RootSystem, invert_matrix
from .series import AffineWeight, rho_hat


def _floor_plus_sqrt(x: Fraction, r2: Fraction) -> int:
    """floor(x + sqrt(r2)) for rationals, r2 >= 0, computed exactly."""
    if r2 < 0:
        raise ValueError("negative radicand")
    # integer part estimate, then fix up by exact comparison
    t = int(x) + int(r2) + 2
    while Fraction(t) > x and (Fraction(t) - x) ** 2 > r2:
        t -= 1
    return t


def _ceil_minus_sqrt(x: Fraction, r2: Fraction) -> int:
    return -_floor_plus_sqrt(-x, r2)


def quad_points(M: list[list[Fraction]], L: list[Fraction],
                B: Fraction) -> list[tuple[int, ...]]:
    """All x in Z^r with x^T M x / 2 + L.x <= B, for M positive definite."""
    r = len(M)
    Minv = invert_matrix(M)
    xstar = [
        -sum(Minv[i][j] * L[j] for j in range(r)) for i in range(r)
    ]
    qmin = sum(L[i] * xstar[i] for i in range(r)) / 2
    R2 = 2 * (B - qmin)
    if R2 < 0:
        return []
    ranges = []
    for i in range(r):
        rad2 = R2 * Minv[i][i]
        lo = _ceil_minus_sqrt(xstar[i], rad2)
        hi = _floor_plus_sqrt(xstar[i], rad2)
        if lo > hi:
            return []
        ranges.append(range(lo, hi + 1))
    # clear denominators once so the box test runs on plain integers
    den = 1
    for v in [x for row in M for x in row] + list(L) + [B]:
        den = den * v.denominator // gcd(den, v.denominator)
    # test x^T Mi x + 2 Li.x <= 2 Bi with Mi = 2 den M etc., all integral
    Mi = [[int(v * 2 * den) for v in row] for row in M]
    Li = [int(v * 2 * den) for v in L]
    Bi = int(B * 2 * den)
    out = []
    for x in iproduct(*ranges):
        tot = 0
        for i in range(r):
            xi = x[i]
            if xi:
                row = Mi[i]
                tot += xi * (sum(row[j] * x[j] for j in range(r))
                             + 2 * Li[i])
        if tot <= 2 * Bi:
            out.append(x)
    return out


def drop_of(rs: RootSystem, nu_fin, c: Fraction, gamma) -> Fraction:
    return rs.inner(nu_fin, gamma) + c * rs.norm(gamma) / 2


def lattice_points_below(rs: RootSystem, basis, nu_fin, c: Fraction,
                         bound) -> list[tuple[tuple[int, ...], tuple[Fraction, ...], Fraction]]:
    """All gamma = sum x_i b_i with drop(gamma) <= bound.

    Returns (integer coords, gamma in fundamental coords, exact drop).
    """
    r = len(basis)
    M = [
        [c * rs.inner(basis[i], basis[j]) for j in range(r)] for i in range(r)
    ]
    L = [rs.inner(nu_fin, basis[i]) for i in range(r)]
    pts = quad_points(M, L, Fraction(bound))
    out = []
    for x in pts:
        gamma = tuple(
            sum((Fraction(x[i]) * basis[i][d] for i in range(r)), Fraction(0))
            for d in range(rs.rank)
        )
        out.append((x, gamma, drop_of(rs, nu_fin, c, gamma)))
    out.sort(key=lambda t: (t[2], t[0]))
    return out


RawSum = dict  # {(m, offset root coords): int}


def _accumulate_orbits(rs: RootSystem, nu_fin, items, raw: RawSum,
                       weyl=None) -> None:
    """Add sum_w eps(w) coeff e^{w(mu)-nu} q^m to raw for each item.

    items: iterable of (mu fundamental coords, m, coeff); offsets are stored
    in root coordinates relative to nu_fin.  Weyl-singular mu contribute 0.
    """
    W = weyl if weyl is not None else rs.weyl_group()
    for mu, m, coeff in items:
        if coeff == 0:
            continue
        dom, sgn, regular = rs.to_dominant(mu)
        if not regular:
            continue
        base_coeff = sgn * coeff
        for w in W:
            img = w.apply(dom)
            off = rs.fund_to_root(tuple(a - b for a, b in zip(img, nu_fin)))
            if any(o.denominator != 1 for o in off):
                raise AssertionError("orbit offset left the root lattice")
            key = (m, tuple(int(o) for o in off))
            c = raw.get(key, 0) + w.sign * base_coeff
            if c:
                raw[key] = c
            else:
                del raw[key]


def alt_weyl_raw(rs: RootSystem, lam: AffineWeight, basis, qmax: int,
                 pred=None, coeff_fn=None, jobs: int = 1,
                 weyl=None) -> RawSum:
    """RawSum of sum_w eps(w) w sum_gamma coeff(gamma) t_gamma e^{lam+rho-hat}.

    gamma runs over the lattice spanned by `basis` with drop <= qmax and
    pred(gamma) true.  Terms are exponents relative to lam + (mult of delta);
    the m-grading is the exact delta-drop, which must be integral.
    """
    rhoh = rho_hat(rs)
    nu_fin = tuple(a + b for a, b in zip(lam.finite, rhoh.finite))
    c = lam.level + rhoh.level
    if c <= 0:
        raise ValueError("shifted level k + h_vee must be positive")
    pts = lattice_points_below(rs, basis, nu_fin, c, qmax)
    items = []
    for x, gamma, drop in pts:
        if pred is not None and not pred(gamma, x):
            continue
        if drop.denominator != 1:
            raise AssertionError(f"non-integral drop {drop} at {x}")
        coeff = 1 if coeff_fn is None else coeff_fn(gamma, x)
        mu = tuple(a + c * g for a, g in zip(nu_fin, gamma))
        items.append((mu, int(drop), coeff))
    raw: RawSum = {}
    if jobs > 1:
        # deterministic chunked merge; results do not depend on jobs
        chunks = [items[i::jobs] for i in range(jobs)]
        partials = []
        from concurrent.futures import ThreadPoolExecutor

        def work(chunk):
            part: RawSum = {}
            _accumulate_orbits(rs, nu_fin, chunk, part, weyl=weyl)
            return part

        with ThreadPoolExecutor(max_workers=jobs) as ex:
            partials = list(ex.map(work, chunks))
        for part in partials:
            for key, val in part.items():
                c2 = raw.get(key, 0) + val
                if c2:
                    raw[key] = c2
                else:
                    del raw[key]
    else:
        _accumulate_orbits(rs, nu_fin, items, raw, weyl=weyl)
    return raw


def alt_weyl_raw_points(rs: RootSystem, lam: AffineWeight, gammas,
                        qmax: int, weyl=None) -> RawSum:
    """Same alternating sum over an explicit finite list of gamma vectors."""
    rhoh = rho_hat(rs)
    nu_fin = tuple(a + b for a, b in zip(lam.finite, rhoh.finite))
    c = lam.level + rhoh.level
    items = []
    for gamma in gammas:
        gamma = tuple(Fraction(g) for g in gamma)
        drop = drop_of(rs, nu_fin, c, gamma)
        if drop.denominator != 1:
            raise AssertionError("non-integral drop")
        if drop > qmax:
            continue
        mu = tuple(a + c * g for a, g in zip(nu_fin, gamma))
        items.append((mu, int(drop), 1))
    raw: RawSum = {}
    _accumulate_orbits(rs, nu_fin, items, raw, weyl=weyl)
    return raw


def raw_equal(a: RawSum, b: RawSum) -> bool:
    return {k: v for k, v in a.items() if v} == {k: v for k, v in b.items() if v}


def raw_first_diff(a: RawSum, b: RawSum):
    """First (m, offset, a_coeff, b_coeff) where the two sums differ."""
    keys = set(k for k, v in a.items() if v) | set(k for k, v in b.items() if v)
    for k in sorted(keys):
        ca, cb = a.get(k, 0), b.get(k, 0)
        if ca != cb:
            return (k[0], k[1], ca, cb)
    return None


def raw_restrict(raw: RawSum, qmax: int) -> RawSum:
    return {k: v for k, v in raw.items() if k[0] <= qmax and v}


def raw_scale(raw: RawSum, c: int) -> RawSum:
    return {k: c * v for k, v in raw.items() if c * v}


def raw_add(a: RawSum, b: RawSum, bsign: int = 1) -> RawSum:
    out = dict(a)
    for k, v in b.items():
        c = out.get(k, 0) + bsign * v
        if c:
            out[k] = c
        else:
            out.pop(k, None)
    return out


def raw_mul_qslice(raw: RawSum, qpoly: dict[int, int], qmax: int) -> RawSum:
    """Multiply by a pure q-power series given as {power: coeff}."""
    out: RawSum = {}
    for (m, off), v in raw.items():
        for j, c in qpoly.items():
            if m + j > qmax:
                continue
            key = (m + j, off)
            nc = out.get(key, 0) + v * c
            if nc:
                out[key] = nc
            else:
                out.pop(key, None)
    return out


def raw_mul_slices(a: RawSum, b_slices: dict[int, dict[tuple[int, ...], int]],
                   qmax: int) -> RawSum:
    """Multiply a RawSum by sliced data {m: {offset: coeff}}."""
    out: RawSum = {}
    for (m1, o1), c1 in a.items():
        for m2, poly in b_slices.items():
            m = m1 + m2
            if m > qmax:
                continue
            for o2, c2 in poly.items():
                key = (m, tuple(x + y for x, y in zip(o1, o2)))
                nc = out.get(key, 0) + c1 * c2
                if nc:
                    out[key] = nc
                else:
                    out.pop(key, None)
    return out


def raw_to_slices(raw: RawSum, qmax: int,
                  allow_negative: bool = False) -> dict[int, dict[tuple[int, ...], int]]:
    slices: dict[int, dict[tuple[int, ...], int]] = {}
    for (m, off), c in raw.items():
        if m < 0 and not allow_negative:
            raise ValueError(f"uncancelled negative q-power {m}")
        if m > qmax or not c:
            continue
        slices.setdefault(m, {})[off] = slices.get(m, {}).get(off, 0) + c
    return {
        m: {o: c for o, c in b.items() if c} for m, b in slices.items()
        if any(b.values())
    }
