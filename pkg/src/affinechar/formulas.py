"""Character formulas for negative-level highest weight modules.

Numerators are "raw" dicts {(m, offset): coeff} relative to e^{Lambda} times
the shifted denominator normalization of lattice.py: dividing the raw data by
the sliced denominator yields weight multiplicities of L(Lambda).  Characters
are returned as CharSlices relative to the module's own top weight.  All
coefficients are exact integers.

The half-lattice numerators use a predicate on the pairing of the translation
gamma with a chosen fundamental weight; the parity-restricted ones further
constrain integer coordinates of gamma on the doubled-orthogonal basis.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .lattice import (
    alt_weyl_raw,
    alt_weyl_raw_points,
    lattice_points_below,
    raw_equal,
    raw_first_diff,
    raw_mul_slices,
    raw_scale,
)
from .rootdata import (
    RootSystem,
    coroot_lattice_basis,
    gamma_basis_C,
    root_lattice_basis,
    root_system,
)
from .series import (
    CharSlices,
    character_from_numerator,
    denominator_slices,
    phi_slices,
    qpoly_invert,
    qpoly_mul,
    weight_from_coeffs,
)
from . import fock
from . import superden


def _unit(rs: RootSystem, i: int) -> tuple[Fraction, ...]:
    """Fundamental coordinates of the i-th fundamental weight, i >= 1."""
    return tuple(Fraction(int(j == i - 1)) for j in range(rs.rank))


def _pairing(rs: RootSystem, gf, i: int) -> Fraction:
    return rs.inner(gf, _unit(rs, i))


def _orth_coords(rs: RootSystem, gf) -> tuple[int, ...]:
    """Integer coordinates j_k of gamma on the doubled orthogonal basis.

    j_k is the pairing of gamma with the k-th coordinate direction; for the
    C-family lattice of translations these are exactly the integers with
    gamma = sum_k j_k (2 eps_k).
    """
    out = []
    prev = Fraction(0)
    for i in range(1, rs.rank + 1):
        cur = _pairing(rs, gf, i)
        v = cur - prev
        if v.denominator != 1:
            raise AssertionError("pairing left the integers")
        out.append(int(v))
        prev = cur
    return tuple(out)


def slices_to_raw(ch: CharSlices) -> dict:
    return {(m, off): c for m, b in ch.slices.items() for off, c in b.items()}


def raw_halve(raw: dict) -> dict:
    out = {}
    for k, v in raw.items():
        if v % 2:
            raise ArithmeticError(
                f"odd coefficient {v} at {k}: the halved sum is not integral")
        if v:
            out[k] = v // 2
    return out


# -- integrable weights --------------------------------------------------


def integrable_numerator(rs: RootSystem, lam, qmax: int, jobs: int = 1,
                         weyl=None) -> dict:
    """Full-lattice alternating numerator for a dominant integral weight."""
    m0 = lam.level - sum(
        f * cm for f, cm in zip(lam.finite, map(Fraction, rs.comarks)))
    coeffs = (m0,) + tuple(lam.finite)
    for c in coeffs:
        if c.denominator != 1 or c < 0:
            raise ValueError(f"weight is not dominant integral: {coeffs}")
    return alt_weyl_raw(rs, lam, coroot_lattice_basis(rs), qmax,
                        jobs=jobs, weyl=weyl)


# -- the A-family level -1 tower -----------------------------------------


def sl_first_numerator(n: int, s: int, qmax: int, jobs: int = 1):
    """Numerator of the level -1 module with s on the first node."""
    if n < 3:
        raise ValueError("needs n >= 3; see sl2_closed_numerator for n = 2")
    if s < 0:
        raise ValueError("needs s >= 0")
    rs = root_system("A", n - 1)
    lam = weight_from_coeffs(rs, (-(1 + s), s) + (0,) * (n - 2))
    w1 = _unit(rs, 1)
    raw = alt_weyl_raw(rs, lam, root_lattice_basis(rs), qmax,
                       pred=lambda gf, x: rs.inner(gf, w1) >= 0, jobs=jobs)
    return rs, lam, raw


def sl_last_numerator(n: int, s: int, qmax: int, jobs: int = 1):
    """Numerator of the level -1 module with s on the last node."""
    if n < 3:
        raise ValueError("needs n >= 3; see sl2_closed_numerator for n = 2")
    if s < 0:
        raise ValueError("needs s >= 0")
    rs = root_system("A", n - 1)
    lam = weight_from_coeffs(rs, (-(1 + s),) + (0,) * (n - 2) + (s,))
    wl = _unit(rs, n - 1)
    raw = alt_weyl_raw(rs, lam, root_lattice_basis(rs), qmax,
                       pred=lambda gf, x: rs.inner(gf, wl) >= 0, jobs=jobs)
    return rs, lam, raw


def diagram_flip_raw(raw: dict) -> dict:
    """Reverse every offset vector (the order-2 diagram symmetry)."""
    return {(m, off[::-1]): c for (m, off), c in raw.items()}


def sl2_closed_numerator(s: int):
    """Two-term closed numerator for the rank-1 tower member."""
    if s < 0:
        raise ValueError("needs s >= 0")
    rs = root_system("A", 1)
    lam = weight_from_coeffs(rs, (-(1 + s), s))
    raw = {(0, (0,)): 1, (0, (-(s + 1),)): -1}
    return rs, lam, raw


def sl2_lattice_numerator(s: int, qmax: int):
    """Rank-1 half-lattice sum; agrees with the closed form only for
    q-powers up to s+1, with a genuine extra term at s+2."""
    rs = root_system("A", 1)
    lam = weight_from_coeffs(rs, (-(1 + s), s))
    w1 = _unit(rs, 1)
    raw = alt_weyl_raw(rs, lam, root_lattice_basis(rs), qmax,
                       pred=lambda gf, x: rs.inner(gf, w1) >= 0)
    return rs, lam, raw


# -- the C-family level -1 modules ---------------------------------------


def sp_a_numerator(n: int, s: int, qmax: int, jobs: int = 1):
    """Half-lattice numerator for the symplectic tower, s >= 1."""
    if n < 4 or n % 2:
        raise ValueError("needs even n >= 4")
    if s < 1:
        raise ValueError("needs s >= 1; s = 0 goes through the split forms")
    npr = n // 2
    rs = root_system("C", npr)
    lam = weight_from_coeffs(rs, (-(1 + s), s) + (0,) * (npr - 1))
    w1 = _unit(rs, 1)
    raw = alt_weyl_raw(rs, lam, coroot_lattice_basis(rs), qmax,
                       pred=lambda gf, x: rs.inner(gf, w1) >= 0, jobs=jobs)
    return rs, lam, raw


def _long_root_odd_slices(rs: RootSystem, qmax: int):
    """{m: {off: c}} for prod over long roots a and odd k of (1-e^a q^k)^{-1}."""
    slices: dict[int, dict[tuple[int, ...], int]] = {0: {(0,) * rs.rank: 1}}
    longs = []
    for a in rs.positive_roots:
        if rs.norm(a.fund) == 2:
            rc = tuple(int(c) for c in a.root_coords)
            longs.append(rc)
            longs.append(tuple(-c for c in rc))
    for rc in longs:
        k = 1
        while k <= qmax:
            for m in range(0, qmax - k + 1):
                b = slices.get(m)
                if not b:
                    continue
                tgt = slices.setdefault(m + k, {})
                for off, c in list(b.items()):
                    noff = tuple(a + d for a, d in zip(off, rc))
                    nc = tgt.get(noff, 0) + c
                    if nc:
                        tgt[noff] = nc
                    else:
                        del tgt[noff]
            k += 2
    return slices


def sp_twist_product_character(rs: RootSystem, qmax: int) -> CharSlices:
    """The closed product side of the twisted denominator identity,
    relative to the level -1 vacuum weight."""
    lam = weight_from_coeffs(rs, (-1,) + (0,) * rs.rank)
    ratio = qpoly_mul(phi_slices(qmax, step=2),
                      qpoly_invert(phi_slices(qmax), qmax), qmax)
    base = CharSlices(rs, lam, qmax, _long_root_odd_slices(rs, qmax))
    return base.mul_qpoly(ratio)


def _sp_halves(n: int, qmax: int, jobs: int = 1):
    """Lattice-sum character at the vacuum weight, and the twist product."""
    if n < 4 or n % 2:
        raise ValueError("needs even n >= 4")
    npr = n // 2
    rs = root_system("C", npr)
    lam = weight_from_coeffs(rs, (-1,) + (0,) * npr)
    w1 = _unit(rs, 1)
    raw = alt_weyl_raw(rs, lam, coroot_lattice_basis(rs), qmax,
                       pred=lambda gf, x: rs.inner(gf, w1) >= 0, jobs=jobs)
    ca = character_from_numerator(
        rs, lam, CharSlices.from_raw(rs, lam, raw, qmax))
    m = sp_twist_product_character(rs, qmax)
    return ca, m


def sp_b_character(n: int, qmax: int, jobs: int = 1) -> CharSlices:
    """Character of the level -1 vacuum module, split-form average."""
    ca, m = _sp_halves(n, qmax, jobs)
    return (ca + m).halve()


def sp_c_character_shifted(n: int, qmax: int, jobs: int = 1) -> CharSlices:
    """Split-form half-difference; the partner character times q,
    still written relative to the vacuum weight."""
    ca, m = _sp_halves(n, qmax, jobs)
    return (ca - m).halve()


def sp_c_character(n: int, qmax: int, jobs: int = 1) -> CharSlices:
    """Character of the level -1 module with top on the second node."""
    npr = n // 2
    shifted = sp_c_character_shifted(n, qmax, jobs)
    rs = shifted.rs
    lam2 = weight_from_coeffs(rs, (-2, 0, 1) + (0,) * (npr - 2))
    off2 = tuple(int(c) for c in rs.fund_to_root(_unit(rs, 2)))
    return shifted.rebase(lam2, 1, off2)


# -- parity-restricted half sums -----------------------------------------


def sp_parity_numerator(n: int, variant: str, qmax: int, jobs: int = 1):
    """Numerators with an even-pairing constraint along the last node."""
    if n < 4 or n % 2:
        raise ValueError("needs even n >= 4")
    npr = n // 2
    rs = root_system("C", npr)
    if variant == "a":
        lam = weight_from_coeffs(rs, (-1,) + (0,) * npr)

        def pred(gf, x):
            j = _orth_coords(rs, gf)
            return j[0] >= 0 and sum(j) % 2 == 0
    elif variant == "b":
        lam = weight_from_coeffs(rs, (-2, 0, 1) + (0,) * (npr - 2))

        def pred(gf, x):
            j = _orth_coords(rs, gf)
            return j[1] >= 0 and sum(j) % 2 == 0
    else:
        raise ValueError("variant must be 'a' or 'b'")
    raw = alt_weyl_raw(rs, lam, coroot_lattice_basis(rs), qmax,
                       pred=pred, jobs=jobs)
    return rs, lam, raw


def parity_bracket(npr: int, pred_j, qmax: int, jobs: int = 1) -> dict:
    """Alternating sum over translations with a condition on j-coordinates,
    taken at the level -1 vacuum weight."""
    rs = root_system("C", npr)
    lam = weight_from_coeffs(rs, (-1,) + (0,) * npr)
    return alt_weyl_raw(
        rs, lam, coroot_lattice_basis(rs), qmax,
        pred=lambda gf, x: pred_j(_orth_coords(rs, gf)), jobs=jobs)


def parity_bracket_identity(npr: int, qmax: int, jobs: int = 1):
    """[j1 >= 0, sum odd] must equal -[j1 < 0, sum even]."""
    left = parity_bracket(npr, lambda j: j[0] >= 0 and sum(j) % 2 == 1,
                          qmax, jobs)
    right = parity_bracket(npr, lambda j: j[0] < 0 and sum(j) % 2 == 0,
                           qmax, jobs)
    neg = raw_scale(right, -1)
    return raw_equal(left, neg), raw_first_diff(left, neg)


def window_negation_check(npr: int, omega, qmax: int):
    """Finite window sums: [Omega] = -[Omega'] with j1 -> -j1-1."""
    rs = root_system("C", npr)
    lam = weight_from_coeffs(rs, (-1,) + (0,) * npr)
    gbasis = gamma_basis_C(rs)

    def gammas_of(js):
        return [
            tuple(sum(Fraction(j) * b[i] for j, b in zip(jt, gbasis))
                  for i in range(rs.rank))
            for jt in js
        ]

    omega = [tuple(j) for j in omega]
    omega2 = [(-j[0] - 1,) + j[1:] for j in omega]
    a = alt_weyl_raw_points(rs, lam, gammas_of(omega), qmax)
    b = alt_weyl_raw_points(rs, lam, gammas_of(omega2), qmax)
    neg = raw_scale(b, -1)
    return raw_equal(a, neg), raw_first_diff(a, neg)


def twisted_denominator_check(npr: int, qmax: int, jobs: int = 1):
    """Product side vs the even-parity lattice sum at the vacuum weight."""
    rs = root_system("C", npr)
    prod = sp_twist_product_character(rs, qmax)
    lhs = raw_mul_slices(slices_to_raw(prod), denominator_slices(rs, qmax),
                         qmax)
    rhs = parity_bracket(npr, lambda j: sum(j) % 2 == 0, qmax, jobs)
    return raw_equal(lhs, rhs), raw_first_diff(lhs, rhs)


# -- linear-coefficient numerators ---------------------------------------


def check_deligne_conditions(rs: RootSystem, lam) -> dict:
    """Screen a negative-level weight for the unique orthogonal root setup.

    Needs: nonnegative integer pairings with the simple roots; exactly one
    positive real affine root orthogonal to the shifted weight, and that
    root at delta-depth one.  The scan is complete: orthogonality fixes the
    depth m = (pairing)/(shifted level) per finite root, no truncation.
    """
    failures = []
    k = lam.level
    if k.denominator != 1 or k >= 0:
        failures.append(f"level {k} is not a negative integer")
    if rs.family not in ("A", "D", "E"):
        failures.append(f"family {rs.family} is not simply laced")
    for i, mc in enumerate(lam.finite):
        if mc.denominator != 1 or mc < 0:
            failures.append(
                f"pairing {mc} with simple root {i + 1} is not in Z>=0")
    if failures:
        return {"ok": False, "alpha": None, "witnesses": [],
                "failures": failures}
    c = k + rs.dual_coxeter
    if c <= 0:
        return {"ok": False, "alpha": None, "witnesses": [],
                "failures": [f"shifted level {c} is not positive"]}
    lam_rho = tuple(f + 1 for f in lam.finite)
    witnesses = []
    for a in rs.positive_roots:
        val = rs.inner(lam_rho, a.fund)
        m = val / c
        if m.denominator == 1 and m >= 1:
            witnesses.append((a, int(m)))
    ok = len(witnesses) == 1 and witnesses[0][1] == 1
    if not ok:
        if not witnesses:
            failures.append("no positive root pairs to the shifted level")
        else:
            failures.append(
                "orthogonal roots not unique at depth one: "
                + ", ".join(f"{tuple(map(int, a.root_coords))}@depth{m}"
                            for a, m in witnesses))
    return {
        "ok": ok,
        "alpha": witnesses[0][0] if ok else None,
        "witnesses": witnesses,
        "failures": failures,
    }


def deligne_numerator(rs: RootSystem, lam, qmax: int, jobs: int = 1,
                      weyl=None) -> dict:
    """Numerator with linear coefficients (gamma|alpha)+1, halved exactly."""
    cond = check_deligne_conditions(rs, lam)
    if not cond["ok"]:
        raise ValueError("; ".join(cond["failures"]))
    alpha = cond["alpha"]

    def coeff(gf, x):
        v = rs.inner(alpha.fund, gf) + 1
        if v.denominator != 1:
            raise AssertionError("non-integral coefficient")
        return int(v)

    raw = alt_weyl_raw(rs, lam, coroot_lattice_basis(rs), qmax,
                       coeff_fn=coeff, jobs=jobs, weyl=weyl)
    return raw_halve(raw)


def deligne_enumerate(rs: RootSystem, k: int, mmax: int | None = None):
    """Level-k weights with node coefficients in [0, mmax] that pass the
    screening; returns (coeffs, alpha root coords) pairs.

    The default window mmax = |k| keeps the scan tied to the level; wider
    windows turn up further weights with the same three properties.
    """
    c = k + rs.dual_coxeter
    if c <= 0:
        raise ValueError("shifted level must be positive")
    if mmax is None:
        mmax = -k
    out = []
    for fin in itertools.product(range(mmax + 1), repeat=rs.rank):
        m0 = k - sum(f * cm for f, cm in zip(fin, rs.comarks))
        lam = weight_from_coeffs(rs, (m0,) + fin)
        res = check_deligne_conditions(rs, lam)
        if res["ok"]:
            alpha = tuple(int(x) for x in res["alpha"].root_coords)
            out.append(((int(m0),) + fin, alpha))
    return out


# -- one-variable specializations ----------------------------------------


def phi_power_qpoly(exponent: int, qmax: int) -> dict[int, int]:
    out = {0: 1}
    base = phi_slices(qmax)
    for _ in range(exponent):
        out = qpoly_mul(out, base, qmax)
    return out


def q_dimension_sum(rs: RootSystem, lam, basis, qmax: int,
                    pred=None, coeff_fn=None, halve: bool = False):
    """Graded dimensions via the finite dimension-formula expression.

    Returns the coefficient list of phi(q)^{dim g} * (graded dim), computed
    from the lattice sum alone: the full Weyl sum collapses against the
    finite denominator, leaving one signed dimension value per translation.
    """
    rho = tuple(Fraction(1) for _ in range(rs.rank))
    nu = tuple(a + b for a, b in zip(lam.finite, rho))
    c = lam.level + rs.dual_coxeter
    if c <= 0:
        raise ValueError("shifted level must be positive")
    pts = lattice_points_below(rs, basis, nu, c, qmax)
    acc = [Fraction(0)] * (qmax + 1)
    for x, gf, drop in pts:
        if pred is not None and not pred(gf, x):
            continue
        if drop.denominator != 1:
            raise AssertionError("non-integral drop")
        co = 1 if coeff_fn is None else coeff_fn(gf, x)
        hw = tuple(l + c * g for l, g in zip(lam.finite, gf))
        acc[int(drop)] += co * rs.weyl_dim(hw)
    if halve:
        acc = [a / 2 for a in acc]
    for a in acc:
        if a.denominator != 1:
            raise ArithmeticError(f"non-integral graded dimension {a}")
    return [int(a) for a in acc]


def q_dimension_from_character(ch: CharSlices) -> list[int]:
    """Specialize all finite directions to zero: sum each q-slice."""
    return ch.q_series()


# -- cross-checks tying the construction routes together ------------------


def sl_tower_assembly_check(n: int, height: int, smax: int, jobs: int = 1):
    """Rebuild the superdenominator cone series from the graded characters.

    Every cone monomial belongs to exactly one charge s = k_0 - k_n; the
    tower members with |s| <= smax must reproduce the product side filtered
    to that charge band.
    """
    prod = superden.sl_product(n, height)
    want = {}
    for exps, c in prod.sorted_items():
        if abs(exps[0] - exps[-1]) <= smax:
            want[exps] = c
    got: dict[tuple[int, ...], int] = {}

    def add(key, c):
        if any(k < 0 for k in key):
            raise AssertionError(f"charge term outside the cone: {key}")
        if sum(key) > height:
            return
        nc = got.get(key, 0) + c
        if nc:
            got[key] = nc
        else:
            del got[key]

    rs = root_system("A", n - 1)
    wl = _unit(rs, n - 1)
    for s in range(-smax, smax + 1):
        if s > 0:
            _, _, raw = sl_first_numerator(n, s, height, jobs=jobs)
            for (m, off), c in raw.items():
                key = (s + m,) + tuple(m - o for o in off) + (m,)
                add(key, c)
        else:
            lam = weight_from_coeffs(
                rs, (-(1 - s),) + (0,) * (n - 2) + (-s,))
            raw = alt_weyl_raw(rs, lam, root_lattice_basis(rs), height,
                               pred=lambda gf, x: rs.inner(gf, wl) >= 0,
                               jobs=jobs)
            for (m, off), c in raw.items():
                key = (m,) + tuple(m - o for o in off) + (m - s,)
                add(key, c)
    if got == want:
        return True, None
    keys = sorted(set(got) | set(want))
    for k in keys:
        if got.get(k, 0) != want.get(k, 0):
            return False, (k, got.get(k, 0), want.get(k, 0))
    return False, None


def sp_sector_restriction_check(n: int, s: int, qmax: int):
    """Folded free-field sector times the denominator vs the half sum."""
    npr = n // 2
    rs = root_system("C", npr)
    chf = fock.charge_sector_character_sp(rs, s, qmax)
    lhs = raw_mul_slices(slices_to_raw(chf), denominator_slices(rs, qmax),
                         qmax)
    w1 = _unit(rs, 1)
    rhs = alt_weyl_raw(rs, chf.base, coroot_lattice_basis(rs), qmax,
                       pred=lambda gf, x: rs.inner(gf, w1) >= 0)
    return raw_equal(lhs, rhs), raw_first_diff(lhs, rhs)


def sp_flip_decomposition_check(n: int, qmax: int):
    """The two flip eigenspaces of the charge-zero sector must match the
    two-summand combinations of the split characters and the rank-one
    oscillator halves."""
    npr = n // 2
    rs = root_system("C", npr)
    plus, minus = fock.charge_zero_split(n, 2 * qmax)
    f0p = fock.split_to_char(rs, plus, qmax)
    f0m = fock.split_to_char(rs, minus, qmax)
    vp, vm = fock.oscillator_split(qmax)
    chb = sp_b_character(n, qmax)
    chc = sp_c_character_shifted(n, qmax)
    eq1 = chb.mul_qpoly(vp) + chc.mul_qpoly(vm) == f0p
    eq2 = chb.mul_qpoly(vm) + chc.mul_qpoly(vp) == f0m
    return eq1 and eq2, None if (eq1 and eq2) else (eq1, eq2)
