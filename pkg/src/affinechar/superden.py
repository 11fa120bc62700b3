"""Cone expansions of affine super Weyl denominators, two frames.

sl frame: n+1 cone directions (x0 for the affinizing root, x1..xn for the
finite simple roots, xn odd); every direction has delta-mark 1.

spo frame: n'+2 directions (x0; xodd; x1..xn' for the C simple roots); the
delta-marks are (1, 1, 2, ..., 2, 1).

Each frame gets the denominator two ways, normalized by e^{-rho'}: a product
over explicit factor families, and an alternating Weyl-plus-translation sum
expanded by the geometric series in the odd direction.  The sum splits into
two branches, p >= 0 against p < 0, with the sign of the pairing between the
translation and a fixed fundamental weight deciding which branch a lattice
point feeds.  Both sides are height-truncated cone series, exact over Z.
"""

from __future__ import annotations

from fractions import Fraction

from .lattice import lattice_points_below
from .rootdata import coroot_lattice_basis, root_lattice_basis, root_system
from .series import AffineWeight, ExpSeries

_ZERO = AffineWeight.make((), 0, 0)


def _scaled(vec, marks, k: int) -> tuple[int, ...]:
    return tuple(v + k * m for v, m in zip(vec, marks))


def _minus(vec, marks, k: int) -> tuple[int, ...]:
    return tuple(k * m - v for v, m in zip(vec, marks))


def sl_product(n: int, height: int) -> ExpSeries:
    """Product form for the sl frame, truncated by cone height."""
    if n < 3:
        raise ValueError("needs n >= 3")
    nv = n + 1
    marks = (1,) * nv
    htq = nv
    s = ExpSeries.one(nv, _ZERO, height)
    zero = (0,) * nv
    for _ in range(n):
        k = 1
        while k * htq <= height:
            s.mul_one_minus(_scaled(zero, marks, k))
            k += 1
    rs = root_system("A", n - 1)
    for a in rs.positive_roots:
        e = [0] * nv
        for j, c in enumerate(a.root_coords):
            e[1 + j] = int(c)
        e = tuple(e)
        hte = sum(e)
        k = 0
        while hte + k * htq <= height:
            s.mul_one_minus(_scaled(e, marks, k))
            k += 1
        k = 1
        while k * htq - hte <= height:
            s.mul_one_minus(_minus(e, marks, k))
            k += 1
    for j in range(1, n + 1):
        e = tuple(1 if j <= i <= n else 0 for i in range(nv))
        hte = n + 1 - j
        k = 1
        while k * htq - hte <= height:
            s.mul_geometric(_minus(e, marks, k))
            k += 1
        k = 1
        while hte + (k - 1) * htq <= height:
            s.mul_geometric(_scaled(e, marks, k - 1))
            k += 1
    return s


def spo_product(npr: int, height: int) -> ExpSeries:
    """Product form for the spo frame, truncated by cone height."""
    if npr < 2:
        raise ValueError("needs n' >= 2")
    nv = npr + 2
    marks = (1, 1) + (2,) * (npr - 1) + (1,)
    htq = sum(marks)
    s = ExpSeries.one(nv, _ZERO, height)
    zero = (0,) * nv
    # one oscillator family and the rank-many imaginary families
    for _ in range(1 + npr):
        k = 1
        while k * htq <= height:
            s.mul_one_minus(_scaled(zero, marks, k))
            k += 1
    rs = root_system("C", npr)
    for a in rs.positive_roots:
        e = (0, 0) + tuple(int(c) for c in a.root_coords)
        hte = sum(e)
        k = 0
        while hte + k * htq <= height:
            s.mul_one_minus(_scaled(e, marks, k))
            k += 1
        k = 1
        while k * htq - hte <= height:
            s.mul_one_minus(_minus(e, marks, k))
            k += 1
    odd = [(0, 1) + (0,) * npr]
    for i in range(1, npr + 1):
        odd.append((0, 1) + tuple(1 if j <= i else 0 for j in range(1, npr + 1)))
    for i in range(1, npr):
        e = [0, 1]
        for j in range(1, npr + 1):
            if j < i:
                e.append(1)
            elif j <= npr - 1:
                e.append(2)
            else:
                e.append(1)
        odd.append(tuple(e))
    if len(odd) != 2 * npr:
        raise AssertionError("odd factor family miscounted")
    for e in odd:
        hte = sum(e)
        k = 1
        while k * htq - hte <= height:
            s.mul_geometric(_minus(e, marks, k))
            k += 1
        k = 1
        while hte + (k - 1) * htq <= height:
            s.mul_geometric(_scaled(e, marks, k - 1))
            k += 1
    return s


def _branch_sum(rs, basis, lamb, shift, kvec_fn, height: int):
    """Shared two-branch lattice sum; returns {k-tuple: coeff}.

    lamb: fundamental coordinates of the pairing weight (the odd direction's
    finite shadow).  shift: multiplier of the shifted level (h-vee minus the
    odd correction).  kvec_fn(D, p, cro) maps drop, geometric exponent and
    the finite root coordinates to the full cone exponent vector.
    """
    W = rs.weyl_group()
    rho_f = tuple(Fraction(1) for _ in range(rs.rank))
    out: dict[tuple[int, ...], int] = {}
    for branch in (1, -1):
        nu0 = rho_f if branch == 1 else tuple(
            a - b for a, b in zip(rho_f, lamb))
        pts = lattice_points_below(rs, basis, nu0, Fraction(shift), height)
        for _x, gf, d0 in pts:
            pair = rs.inner(gf, lamb)
            if pair.denominator != 1:
                raise AssertionError("pairing left the integers")
            pair = int(pair)
            if (branch == 1) != (pair >= 0):
                continue
            if d0.denominator != 1:
                raise AssertionError("non-integral drop")
            D = int(d0)
            p = 0 if branch == 1 else -1
            dp = 1 if branch == 1 else -1
            prev_hmin = None
            steps = 0
            while True:
                steps += 1
                if steps > 8 * height + 32:
                    raise AssertionError("runaway geometric branch")
                nu = tuple(r + Fraction(shift) * g + Fraction(p) * l
                           for r, g, l in zip(rho_f, gf, lamb))
                hmin = None
                for w in W:
                    img = w.apply(nu)
                    cro = rs.fund_to_root(tuple(
                        a - b - Fraction(p) * l
                        for a, b, l in zip(img, rho_f, lamb)))
                    if any(c.denominator != 1 for c in cro):
                        raise AssertionError("offset left the root lattice")
                    ks = kvec_fn(D, p, tuple(int(c) for c in cro))
                    h = sum(ks)
                    hmin = h if hmin is None else min(hmin, h)
                    if h <= height:
                        c = out.get(ks, 0) + branch * w.sign
                        if c:
                            out[ks] = c
                        else:
                            del out[ks]
                if prev_hmin is not None and hmin < prev_hmin + 1:
                    raise AssertionError("height stopped growing with p")
                prev_hmin = hmin
                if hmin > height:
                    break
                p += dp
                D += pair * dp
    return out


def _to_cone_series(terms: dict, nvars: int, height: int) -> ExpSeries:
    s = ExpSeries(nvars, _ZERO, height)
    for ks, c in terms.items():
        if c and any(k < 0 for k in ks):
            raise AssertionError(f"uncancelled term outside the cone: {ks}")
        s.add_term(ks, c)
    return s


def sl_sum(n: int, height: int) -> ExpSeries:
    """Alternating sum form for the sl frame."""
    if n < 3:
        raise ValueError("needs n >= 3")
    rs = root_system("A", n - 1)
    lamb = tuple(Fraction(int(i == n - 2)) for i in range(n - 1))

    def kvec(D, p, cro):
        return (D,) + tuple(D - c for c in cro) + (D + p,)

    terms = _branch_sum(rs, root_lattice_basis(rs), lamb, n - 1, kvec, height)
    return _to_cone_series(terms, n + 1, height)


def spo_sum(npr: int, height: int) -> ExpSeries:
    """Alternating sum form for the spo frame."""
    if npr < 2:
        raise ValueError("needs n' >= 2")
    rs = root_system("C", npr)
    lamb = tuple(Fraction(int(i == 0)) for i in range(npr))

    def kvec(D, p, cro):
        ks = [D, D + p]
        for c in cro[:-1]:
            ks.append(2 * D - c)
        ks.append(D - cro[-1])
        return tuple(ks)

    terms = _branch_sum(rs, coroot_lattice_basis(rs), lamb, npr, kvec, height)
    return _to_cone_series(terms, npr + 2, height)
