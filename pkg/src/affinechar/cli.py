"""Command line interface.

compute        numerator or character of one formula at one weight
qdim           graded dimension series of a character
verify         run named identity checks and report
list-deligne   screen a window of weights for the orthogonal-root setup

JSON is the canonical output format and is byte-identical for identical
configurations, whatever --jobs says; verify reports carry wall times and
are exempt.  Exit codes: 0 success, 1 a checked identity failed, 2 bad
usage or a violated precondition.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from fractions import Fraction

from . import fock
from . import formulas as fm
from . import superden
from .lattice import (
    raw_equal,
    raw_first_diff,
    raw_mul_slices,
    raw_restrict,
)
from .rootdata import (
    WeylSizeError,
    coroot_lattice_basis,
    root_system,
)
from .series import (
    AffineWeight,
    CharSlices,
    character_from_numerator,
    denominator_slices,
    qpoly_mul,
    translate,
    weight_from_coeffs,
)

FORMULAS = (
    "integrable", "sl-first", "sl-last", "sl2-closed", "sp-a",
    "sp-b", "sp-c", "sp-parity-a", "sp-parity-b", "deligne",
)

CHECKS = (
    "superdenominator-sl", "superdenominator-sp", "tower-fock",
    "flip-symmetry", "sl2-closed", "tower-assembly", "sector-restriction",
    "flip-decomposition", "twisted-denominator", "parity-vs-split",
    "parity-bracket", "window-negation", "deligne-positivity",
    "qdim-two-path", "properties",
)


class UsageError(Exception):
    pass


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise UsageError(msg)


def _algebra(args):
    fam = args.type.upper()
    try:
        return root_system(fam, args.rank)
    except ValueError as e:
        raise UsageError(str(e))


def _weight(rs, coeffs, delta):
    _need(coeffs is not None, "this formula needs --weight m0 .. ml")
    _need(len(coeffs) == rs.rank + 1,
          f"weight needs rank+1 = {rs.rank + 1} entries, got {len(coeffs)}")
    lam = weight_from_coeffs(rs, coeffs)
    if delta:
        lam = AffineWeight.make(lam.finite, lam.level,
                                lam.delta + Fraction(delta))
    return lam


def _tower_s(args, rs, shape: str):
    """s from --s or from a weight of the required shape."""
    if args.s is not None:
        _need(args.s >= 0, "needs s >= 0")
        return args.s
    _need(args.weight is not None, "needs --s or --weight")
    co = args.weight
    _need(len(co) == rs.rank + 1,
          f"weight needs rank+1 = {rs.rank + 1} entries, got {len(co)}")
    if shape == "first":
        s = co[1]
        want = [-(1 + s), s] + [0] * (rs.rank - 1)
    else:
        s = co[-1]
        want = [-(1 + s)] + [0] * (rs.rank - 1) + [s]
    _need(s >= 0 and co == want,
          "weight must be -(1+s) on node 0 and s on the charged node")
    return s


def _fixed_weight(args, rs, want, what: str):
    if args.weight is not None:
        _need(list(args.weight) == list(want),
              f"{what} is the module at weight {tuple(want)}")
    return weight_from_coeffs(rs, want)


def _weyl(rs, args):
    if args.allow_large_weyl:
        return rs.weyl_group(allow_large=True)
    return None


def _divide(rs, lam, raw, qmax):
    return character_from_numerator(
        rs, lam, CharSlices.from_raw(rs, lam, raw, qmax))


def _compute_series(args) -> CharSlices:
    f = args.formula
    order = args.order
    _need(order >= 0, "needs order >= 0")
    jobs = args.jobs

    if f == "integrable":
        rs = _algebra(args)
        lam = _weight(rs, args.weight, args.delta)
        raw = fm.integrable_numerator(rs, lam, order, jobs=jobs,
                                      weyl=_weyl(rs, args))
        if args.character:
            return _divide(rs, lam, raw, order)
        return CharSlices.from_raw(rs, lam, raw, order)

    if f in ("sl-first", "sl-last"):
        _need(args.type.upper() == "A", f"{f} lives on type A")
        n = args.rank + 1
        _need(n >= 3, f"{f} needs n >= 3; rank 1 has the closed form")
        s = _tower_s(args, _algebra(args), "first" if f == "sl-first" else "last")
        build = fm.sl_first_numerator if f == "sl-first" else fm.sl_last_numerator
        rs, lam, raw = build(n, s, order, jobs=jobs)
        if args.character:
            return _divide(rs, lam, raw, order)
        return CharSlices.from_raw(rs, lam, raw, order)

    if f == "sl2-closed":
        _need(args.type.upper() == "A" and args.rank == 1,
              "sl2-closed lives on type A rank 1")
        s = _tower_s(args, _algebra(args), "first")
        rs, lam, raw = fm.sl2_closed_numerator(s)
        if args.character:
            return _divide(rs, lam, raw, order)
        return CharSlices.from_raw(rs, lam, raw, order)

    if f == "sp-a":
        _need(args.type.upper() == "C", "sp-a lives on type C")
        rs = _algebra(args)
        s = _tower_s(args, rs, "first")
        _need(s >= 1, "sp-a needs s >= 1; s = 0 is covered by sp-b")
        rs, lam, raw = fm.sp_a_numerator(2 * rs.rank, s, order, jobs=jobs)
        if args.character:
            return _divide(rs, lam, raw, order)
        return CharSlices.from_raw(rs, lam, raw, order)

    if f in ("sp-b", "sp-c"):
        _need(args.type.upper() == "C", f"{f} lives on type C")
        rs = _algebra(args)
        n = 2 * rs.rank
        if f == "sp-b":
            lam = _fixed_weight(args, rs, [-1] + [0] * rs.rank, "sp-b")
            ch = fm.sp_b_character(n, order, jobs=jobs)
        else:
            _need(rs.rank >= 2, "sp-c needs rank >= 2")
            lam = _fixed_weight(args, rs, [-2, 0, 1] + [0] * (rs.rank - 2),
                                "sp-c")
            ch = fm.sp_c_character(n, order + 1, jobs=jobs)
        if args.character:
            return ch
        raw = raw_mul_slices(fm.slices_to_raw(ch),
                             denominator_slices(rs, ch.qmax), ch.qmax)
        return CharSlices.from_raw(rs, lam, raw, ch.qmax)

    if f in ("sp-parity-a", "sp-parity-b"):
        _need(args.type.upper() == "C", f"{f} lives on type C")
        rs = _algebra(args)
        variant = f[-1]
        if variant == "a":
            _fixed_weight(args, rs, [-1] + [0] * rs.rank, f)
        else:
            _need(rs.rank >= 2, f"{f} needs rank >= 2")
            _fixed_weight(args, rs, [-2, 0, 1] + [0] * (rs.rank - 2), f)
        rs, lam, raw = fm.sp_parity_numerator(2 * rs.rank, variant, order,
                                              jobs=jobs)
        if args.character:
            return _divide(rs, lam, raw, order)
        return CharSlices.from_raw(rs, lam, raw, order)

    if f == "deligne":
        rs = _algebra(args)
        lam = _weight(rs, args.weight, args.delta)
        cond = fm.check_deligne_conditions(rs, lam)
        _need(cond["ok"], "weight fails the screening: "
              + "; ".join(cond["failures"]))
        raw = fm.deligne_numerator(rs, lam, order, jobs=jobs,
                                   weyl=_weyl(rs, args))
        if args.character:
            return _divide(rs, lam, raw, order)
        return CharSlices.from_raw(rs, lam, raw, order)

    raise UsageError(f"unknown formula {f}")


# -- output renderers -----------------------------------------------------


def _emit(text: str) -> None:
    sys.stdout.write(text)


def _series_text(ch: CharSlices, fmt: str) -> str:
    d = ch.to_json_dict()
    if fmt == "json":
        return json.dumps(d, indent=1) + "\n"
    if fmt == "tsv":
        cols = 1 + ch.rs.rank
        head = "\t".join(f"k{i}" for i in range(cols)) + "\tcoeff"
        rows = ["\t".join(str(x) for x in t["exps"]) + "\t" + t["coeff"]
                for t in d["terms"]]
        return "\n".join([head] + rows) + "\n"
    lines = [
        f"base: finite {tuple(str(x) for x in d['base'])}, "
        f"level {d['level']}, delta {d['delta']}",
        f"order {d['order']}, {len(d['terms'])} terms",
        "legend: q = e^(-delta), x_i = e^(alpha_i) offset from the base",
    ]
    for t in d["terms"]:
        m, off = t["exps"][0], t["exps"][1:]
        mono = [f"q^{m}"] if m else []
        mono += [f"x{i + 1}^{o}" for i, o in enumerate(off) if o]
        lines.append(f"{t['coeff']:>14}  " + (" ".join(mono) or "1"))
    return "\n".join(lines) + "\n"


def _qdim_text(lam, order: int, series: list[int], fmt: str) -> str:
    if fmt == "json":
        d = {
            "base": [str(x) for x in lam.finite],
            "level": str(lam.level),
            "delta": str(lam.delta),
            "order": order,
            "qdim": [str(v) for v in series],
        }
        return json.dumps(d, indent=1) + "\n"
    if fmt == "tsv":
        rows = [f"{m}\t{v}" for m, v in enumerate(series)]
        return "\n".join(["m\tdim"] + rows) + "\n"
    parts = []
    for m, v in enumerate(series):
        if v == 0:
            continue
        unit = "" if m == 0 else (" q" if m == 1 else f" q^{m}")
        parts.append(f"{v}{unit}")
    return (" + ".join(parts) or "0") + "\n"


# -- verify checks --------------------------------------------------------


def _n_arg(args, default: int, even: bool = False) -> int:
    n = args.n if args.n is not None else default
    _need(n >= 3, "needs n >= 3")
    if even:
        _need(n % 2 == 0 and n >= 4, "needs even n >= 4")
    return n


def _order_arg(args, default: int) -> int:
    o = args.order if args.order is not None else default
    _need(o >= 0, "needs order >= 0")
    return o


def _check_superdenominator_sl(args):
    n = _n_arg(args, 3)
    order = _order_arg(args, 12)
    prod = superden.sl_product(n, order)
    summ = superden.sl_sum(n, order)
    ok = prod == summ
    mism = None
    if not ok:
        for e, c in prod.sorted_items():
            if summ.coeff(e) != c:
                mism = f"exps {e}: product {c}, sum {summ.coeff(e)}"
                break
        else:
            for e, c in summ.sorted_items():
                if prod.coeff(e) != c:
                    mism = f"exps {e}: product {prod.coeff(e)}, sum {c}"
                    break
    return {"identity": f"superdenominator-sl n={n}", "order": order,
            "terms": prod.n_terms(), "ok": ok, "mismatch": mism}


def _check_superdenominator_sp(args):
    n = _n_arg(args, 4, even=True)
    order = _order_arg(args, 8)
    prod = superden.spo_product(n // 2, order)
    summ = superden.spo_sum(n // 2, order)
    ok = prod == summ
    mism = None
    if not ok:
        for e, c in prod.sorted_items():
            if summ.coeff(e) != c:
                mism = f"exps {e}: product {c}, sum {summ.coeff(e)}"
                break
    return {"identity": f"superdenominator-sp n={n}", "order": order,
            "terms": prod.n_terms(), "ok": ok, "mismatch": mism}


def _check_tower_fock(args):
    n = _n_arg(args, 3)
    s = args.s if args.s is not None else 0
    _need(s >= 0, "needs s >= 0")
    order = _order_arg(args, 4)
    rs, lam, raw = fm.sl_first_numerator(n, s, order, jobs=args.jobs)
    ch = _divide(rs, lam, raw, order)
    oracle = fock.charge_sector_character(rs, s, order)
    ok = ch == oracle
    mism = None
    if not ok:
        d = raw_first_diff(fm.slices_to_raw(ch), fm.slices_to_raw(oracle))
        mism = f"q^{d[0]} offset {d[1]}: lattice {d[2]}, free-field {d[3]}"
    terms = sum(len(b) for b in ch.slices.values())
    return {"identity": f"tower-fock n={n} s={s}", "order": order,
            "terms": terms, "ok": ok, "mismatch": mism}


def _check_flip_symmetry(args):
    n = _n_arg(args, 3)
    s = args.s if args.s is not None else 1
    _need(s >= 0, "needs s >= 0")
    order = _order_arg(args, 4)
    _, _, raw_f = fm.sl_first_numerator(n, s, order, jobs=args.jobs)
    _, _, raw_l = fm.sl_last_numerator(n, s, order, jobs=args.jobs)
    flipped = fm.diagram_flip_raw(raw_l)
    ok = raw_equal(raw_f, flipped)
    d = raw_first_diff(raw_f, flipped)
    mism = None if ok else f"q^{d[0]} offset {d[1]}: {d[2]} vs {d[3]}"
    return {"identity": f"flip-symmetry n={n} s={s}", "order": order,
            "terms": len(raw_f), "ok": ok, "mismatch": mism}


def _check_sl2_closed(args):
    s = args.s if args.s is not None else 0
    _need(s >= 0, "needs s >= 0")
    order = _order_arg(args, s + 3)
    _need(order >= s + 2, f"needs order >= s+2 = {s + 2} to see the "
          "first deviation")
    _, _, closed = fm.sl2_closed_numerator(s)
    _, _, lattice = fm.sl2_lattice_numerator(s, order)
    agree = raw_equal(raw_restrict(closed, s + 1), raw_restrict(lattice, s + 1))
    d = raw_first_diff(closed, lattice)
    sharp = d is not None and d[0] == s + 2
    ok = agree and sharp
    mism = None
    if not agree:
        e = raw_first_diff(raw_restrict(closed, s + 1),
                           raw_restrict(lattice, s + 1))
        mism = f"q^{e[0]} offset {e[1]}: closed {e[2]}, lattice {e[3]}"
    elif not sharp:
        mism = (f"first deviation at q^{d[0]}, wanted q^{s + 2}"
                if d else f"no deviation up to order {order}")
    return {"identity": f"sl2-closed s={s} (agree to q^{s + 1}, "
            f"deviate at q^{s + 2})", "order": order,
            "terms": len(lattice), "ok": ok, "mismatch": mism}


def _check_tower_assembly(args):
    n = _n_arg(args, 3)
    order = _order_arg(args, 6)
    smax = args.smax if args.smax is not None else 2
    _need(smax >= 0, "needs smax >= 0")
    ok, diff = fm.sl_tower_assembly_check(n, order, smax, jobs=args.jobs)
    mism = None if ok else f"exps {diff[0]}: tower {diff[1]}, product {diff[2]}"
    return {"identity": f"tower-assembly n={n} |s|<={smax}", "order": order,
            "terms": 0 if not ok else len(superden.sl_product(n, order).sorted_items()),
            "ok": ok, "mismatch": mism}


def _check_sector_restriction(args):
    n = _n_arg(args, 4, even=True)
    s = args.s if args.s is not None else 1
    _need(s >= 1, "sector restriction needs s >= 1")
    order = _order_arg(args, 3)
    ok, d = fm.sp_sector_restriction_check(n, s, order)
    mism = None if ok else f"q^{d[0]} offset {d[1]}: product {d[2]}, sum {d[3]}"
    return {"identity": f"sector-restriction n={n} s={s}", "order": order,
            "terms": 0, "ok": ok, "mismatch": mism}


def _check_flip_decomposition(args):
    n = _n_arg(args, 4, even=True)
    order = _order_arg(args, 3)
    ok, d = fm.sp_flip_decomposition_check(n, order)
    mism = None if ok else f"eigenspace equalities: {d}"
    return {"identity": f"flip-decomposition n={n}", "order": order,
            "terms": 0, "ok": ok, "mismatch": mism}


def _check_twisted_denominator(args):
    n = _n_arg(args, 4, even=True)
    order = _order_arg(args, 5)
    ok, d = fm.twisted_denominator_check(n // 2, order, jobs=args.jobs)
    mism = None if ok else f"q^{d[0]} offset {d[1]}: product {d[2]}, sum {d[3]}"
    return {"identity": f"twisted-denominator n={n}", "order": order,
            "terms": 0, "ok": ok, "mismatch": mism}


def _check_parity_vs_split(args):
    n = _n_arg(args, 4, even=True)
    order = _order_arg(args, 4)
    _need(order >= 1, "needs order >= 1 for the shifted member")
    rs = root_system("C", n // 2)
    chb = fm.sp_b_character(n, order, jobs=args.jobs)
    chc = fm.sp_c_character(n, order, jobs=args.jobs)
    _, _, raw_a = fm.sp_parity_numerator(n, "a", order, jobs=args.jobs)
    _, _, raw_b = fm.sp_parity_numerator(n, "b", chc.qmax, jobs=args.jobs)
    lhs_a = raw_mul_slices(fm.slices_to_raw(chb),
                           denominator_slices(rs, order), order)
    lhs_b = raw_mul_slices(fm.slices_to_raw(chc),
                           denominator_slices(rs, chc.qmax), chc.qmax)
    ok_a = raw_equal(raw_a, lhs_a)
    ok_b = raw_equal(raw_b, lhs_b)
    mism = None
    if not ok_a:
        d = raw_first_diff(raw_a, lhs_a)
        mism = f"vacuum member q^{d[0]} offset {d[1]}: {d[2]} vs {d[3]}"
    elif not ok_b:
        d = raw_first_diff(raw_b, lhs_b)
        mism = f"shifted member q^{d[0]} offset {d[1]}: {d[2]} vs {d[3]}"
    return {"identity": f"parity-vs-split n={n}", "order": order,
            "terms": len(raw_a), "ok": ok_a and ok_b, "mismatch": mism}


def _check_parity_bracket(args):
    n = _n_arg(args, 4, even=True)
    order = _order_arg(args, 4)
    ok, d = fm.parity_bracket_identity(n // 2, order, jobs=args.jobs)
    mism = None if ok else f"q^{d[0]} offset {d[1]}: {d[2]} vs {d[3]}"
    return {"identity": f"parity-bracket n={n}", "order": order,
            "terms": 0, "ok": ok, "mismatch": mism}


def _parse_omega(text: str, npr: int):
    pts = []
    for part in text.split(";"):
        js = tuple(int(x) for x in part.split(","))
        _need(len(js) == npr, f"each window point needs {npr} coordinates")
        pts.append(js)
    return pts


def _check_window_negation(args):
    n = _n_arg(args, 4, even=True)
    order = _order_arg(args, 4)
    omega = _parse_omega(args.omega or "0,0", n // 2)
    ok, d = fm.window_negation_check(n // 2, omega, order)
    mism = None if ok else f"q^{d[0]} offset {d[1]}: {d[2]} vs {d[3]}"
    return {"identity": f"window-negation n={n} omega={omega}",
            "order": order, "terms": 2 * len(omega), "ok": ok,
            "mismatch": mism}


def _deligne_args(args):
    fam = (args.type or "D").upper()
    rank = args.rank if args.rank is not None else 4
    rs = root_system(fam, rank)
    co = args.weight if args.weight is not None else [-1] + [0] * rank
    _need(len(co) == rank + 1,
          f"weight needs rank+1 = {rank + 1} entries, got {len(co)}")
    return rs, weight_from_coeffs(rs, co)


def _check_deligne_positivity(args):
    rs, lam = _deligne_args(args)
    order = _order_arg(args, 2)
    raw = fm.deligne_numerator(rs, lam, order, jobs=args.jobs,
                               weyl=_weyl(rs, args))
    ch = _divide(rs, lam, raw, order)
    top = ch.coeff(0, (0,) * rs.rank) == 1
    neg = None
    for m in sorted(ch.slices):
        for off, c in sorted(ch.slices[m].items()):
            if c < 0:
                neg = (m, off, c)
                break
        if neg:
            break
    ok = top and neg is None
    mism = None
    if not top:
        mism = f"coefficient at the top weight is {ch.coeff(0, (0,) * rs.rank)}"
    elif neg:
        mism = f"negative multiplicity {neg[2]} at q^{neg[0]} offset {neg[1]}"
    terms = sum(len(b) for b in ch.slices.values())
    co = tuple(int(x) for x in (args.weight or [-1] + [0] * rs.rank))
    return {"identity": f"deligne-positivity {rs.family}{rs.rank} {co}",
            "order": order, "terms": terms, "ok": ok, "mismatch": mism}


def _check_qdim_two_path(args):
    rs, lam = _deligne_args(args)
    order = _order_arg(args, 2)
    cond = fm.check_deligne_conditions(rs, lam)
    _need(cond["ok"], "weight fails the screening: "
          + "; ".join(cond["failures"]))
    alpha = cond["alpha"]

    def co_fn(gf, x):
        return int(rs.inner(alpha.fund, gf) + 1)

    raw = fm.deligne_numerator(rs, lam, order, jobs=args.jobs,
                               weyl=_weyl(rs, args))
    ch = _divide(rs, lam, raw, order)
    direct = fm.q_dimension_sum(rs, lam, coroot_lattice_basis(rs), order,
                                coeff_fn=co_fn, halve=True)
    dim_g = rs.rank + 2 * len(rs.positive_roots)
    via_char = qpoly_mul(fm.phi_power_qpoly(dim_g, order),
                         {m: v for m, v in enumerate(ch.q_series())}, order)
    want = {m: v for m, v in enumerate(direct) if v}
    ok = via_char == want
    mism = None
    if not ok:
        for m in range(order + 1):
            if via_char.get(m, 0) != want.get(m, 0):
                mism = (f"q^{m}: specialization {via_char.get(m, 0)}, "
                        f"direct sum {want.get(m, 0)}")
                break
    return {"identity": f"qdim-two-path {rs.family}{rs.rank}",
            "order": order, "terms": order + 1, "ok": ok, "mismatch": mism}


def _random_series(rng, rs, order):
    from .series import ExpSeries
    base = AffineWeight.make((0,) * rs.rank, 0, 0)
    s = ExpSeries(rs.rank + 1, base, order)
    for _ in range(rng.randrange(1, 5)):
        exps = tuple(rng.randrange(0, 3) for _ in range(rs.rank + 1))
        if sum(exps) <= order:
            s.add_term(exps, rng.randrange(-4, 5))
    return s


def _check_properties(args):
    seed = args.seed if args.seed is not None else 0
    cases = args.cases if args.cases is not None else 200
    rng = random.Random(seed)
    a2 = root_system("A", 2)
    c2 = root_system("C", 2)
    d4 = root_system("D", 4)
    cond = fm.check_deligne_conditions(
        d4, weight_from_coeffs(d4, (-1, 0, 0, 0, 0)))
    alpha = cond["alpha"]
    fails = []

    for it in range(cases):
        # ring laws and truncation coherence on random cone series
        a = _random_series(rng, a2, 5)
        b = _random_series(rng, a2, 5)
        c = _random_series(rng, a2, 5)
        if (a + b) * c != a * c + b * c:
            fails.append(f"case {it}: distributivity")
        if a * b != b * a:
            fails.append(f"case {it}: commutativity")
        if (a * b) * c != a * (b * c):
            fails.append(f"case {it}: associativity")
        k = rng.randrange(0, 5)
        if (a * b).restrict(k) != (a.restrict(k) * b.restrict(k)).restrict(k):
            fails.append(f"case {it}: truncation coherence")

        # translation group law at nonzero level
        lev = rng.choice([-2, -1, 1, 2, 3])
        w = AffineWeight.make(
            [rng.randrange(-3, 4) for _ in range(2)], lev,
            rng.randrange(-2, 3))
        g1 = tuple(Fraction(rng.randrange(-2, 3)) for _ in range(2))
        g2 = tuple(Fraction(rng.randrange(-2, 3)) for _ in range(2))
        one = translate(c2, translate(c2, w, g1), g2)
        both = translate(c2, w, tuple(x + y for x, y in zip(g1, g2)))
        if one != both:
            fails.append(f"case {it}: translation group law")

        # Weyl alternation: sign flips under a simple reflection
        mu = tuple(Fraction(rng.randrange(-4, 5)) for _ in range(2))
        dom, sgn, reg = c2.to_dominant(mu)
        i = rng.randrange(2)
        refl = c2.simple_reflection(i)
        dom2, sgn2, reg2 = c2.to_dominant(refl.apply(mu))
        if reg != reg2 or dom != dom2:
            fails.append(f"case {it}: reflection changed the orbit")
        if reg and sgn2 != -sgn:
            fails.append(f"case {it}: sign not alternating")
        if any(x == 0 for x in mu) and reg:
            fails.append(f"case {it}: singular weight marked regular")

        # antisymmetry of the linear coefficient under the screened root
        cs = [rng.randrange(-2, 3) for _ in range(4)]
        gam = tuple(sum(Fraction(c) * b[j]
                        for c, b in zip(cs, coroot_lattice_basis(d4)))
                    for j in range(4))
        pair = d4.inner(alpha.fund, gam)
        image = tuple(g - (pair + 1) * a
                      for g, a in zip(gam, alpha.fund))
        if int(d4.inner(alpha.fund, image)) + 1 != -(int(pair) + 1):
            fails.append(f"case {it}: coefficient antisymmetry")

        if fails:
            break

    ok = not fails
    return {"identity": f"properties seed={seed} cases={cases}",
            "order": 0, "terms": cases, "ok": ok,
            "mismatch": fails[0] if fails else None}


CHECK_FNS = {
    "superdenominator-sl": _check_superdenominator_sl,
    "superdenominator-sp": _check_superdenominator_sp,
    "tower-fock": _check_tower_fock,
    "flip-symmetry": _check_flip_symmetry,
    "sl2-closed": _check_sl2_closed,
    "tower-assembly": _check_tower_assembly,
    "sector-restriction": _check_sector_restriction,
    "flip-decomposition": _check_flip_decomposition,
    "twisted-denominator": _check_twisted_denominator,
    "parity-vs-split": _check_parity_vs_split,
    "parity-bracket": _check_parity_bracket,
    "window-negation": _check_window_negation,
    "deligne-positivity": _check_deligne_positivity,
    "qdim-two-path": _check_qdim_two_path,
    "properties": _check_properties,
}


def _verify_text(results: list[dict], fmt: str) -> str:
    if fmt == "json":
        d = {"ok": all(r["ok"] for r in results), "checks": results}
        return json.dumps(d, indent=1) + "\n"
    if fmt == "tsv":
        head = "identity\torder\tterms\tseconds\tok\tmismatch"
        rows = [
            f"{r['identity']}\t{r['order']}\t{r['terms']}\t{r['seconds']}"
            f"\t{'pass' if r['ok'] else 'FAIL'}\t{r['mismatch'] or ''}"
            for r in results
        ]
        return "\n".join([head] + rows) + "\n"
    lines = []
    for r in results:
        flag = "pass" if r["ok"] else "FAIL"
        lines.append(f"{flag:4}  {r['identity']}  order {r['order']}"
                     f"  terms {r['terms']}  {r['seconds']}s")
        if r["mismatch"]:
            lines.append(f"      first mismatch: {r['mismatch']}")
    return "\n".join(lines) + "\n"


# -- subcommand drivers ----------------------------------------------------


def cmd_compute(args) -> int:
    ch = _compute_series(args)
    _emit(_series_text(ch, args.format))
    return 0


def cmd_qdim(args) -> int:
    args.character = True
    ch = _compute_series(args)
    _emit(_qdim_text(ch.base, ch.qmax, ch.q_series(), args.format))
    return 0


def cmd_verify(args) -> int:
    names = args.checks
    if names == ["all"]:
        names = list(CHECKS)
    results = []
    for name in names:
        _need(name in CHECK_FNS, f"unknown check {name}; known: "
              + ", ".join(CHECKS))
        t0 = time.perf_counter()
        r = CHECK_FNS[name](args)
        r["seconds"] = f"{time.perf_counter() - t0:.3f}"
        results.append(r)
    _emit(_verify_text(results, args.format))
    return 0 if all(r["ok"] for r in results) else 1


def cmd_list_deligne(args) -> int:
    fam = args.type.upper()
    _need(fam in ("D", "E"), "the screening list covers types D and E")
    rs = _algebra(args)
    _need(args.level < 0, "level must be a negative integer")
    window = args.window if args.window is not None else -args.level
    _need(window >= 0, "window must be >= 0")
    found = fm.deligne_enumerate(rs, args.level, mmax=window)
    if args.format == "json":
        d = {
            "family": fam,
            "rank": rs.rank,
            "level": args.level,
            "window": window,
            "count": len(found),
            "weights": [
                {"coeffs": list(co), "alpha": list(al)} for co, al in found
            ],
        }
        text = json.dumps(d, indent=1) + "\n"
    elif args.format == "tsv":
        head = ("\t".join(f"m{i}" for i in range(rs.rank + 1))
                + "\t" + "\t".join(f"a{i + 1}" for i in range(rs.rank)))
        rows = ["\t".join(str(x) for x in co) + "\t"
                + "\t".join(str(x) for x in al) for co, al in found]
        text = "\n".join([head] + rows) + "\n"
    else:
        lines = [f"{fam}{rs.rank} level {args.level}, node window 0..{window}:"
                 f" {len(found)} weights"]
        for co, al in found:
            lines.append(f"  {co}  orthogonal root {al}")
        text = "\n".join(lines) + "\n"
    _emit(text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    par = argparse.ArgumentParser(
        prog="affinechar",
        description="Exact characters of negative-level modules over "
                    "affine Lie algebras.")
    sub = par.add_subparsers(dest="command", required=True)

    try:
        jobs_default = max(1, int(os.environ.get("JOBS", "1")))
    except ValueError:
        jobs_default = 1

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "tsv", "pretty"),
                        default="json")
    common.add_argument("--jobs", type=int, default=jobs_default,
                        help="worker processes for the lattice sums")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for randomized property checks")
    common.add_argument("--allow-large-weyl", action="store_true",
                        help="enumerate Weyl groups past the safety bound")

    wspec = argparse.ArgumentParser(add_help=False)
    wspec.add_argument("--type", required=True,
                       help="family letter: A, C, D or E")
    wspec.add_argument("--rank", type=int, required=True)
    wspec.add_argument("--weight", type=int, nargs="+", default=None,
                       metavar="M", help="node coefficients m0 .. ml")
    wspec.add_argument("--delta", default="0",
                       help="rational delta shift of the base weight")
    wspec.add_argument("--s", type=int, default=None,
                       help="tower parameter; shorthand for the weight")
    wspec.add_argument("--order", type=int, default=3,
                       help="truncation order in the series' own grading")

    pc = sub.add_parser("compute", parents=[common, wspec],
                        help="compute one formula at one weight")
    pc.add_argument("--formula", required=True, choices=FORMULAS)
    grp = pc.add_mutually_exclusive_group()
    grp.add_argument("--numerator", action="store_true", default=True,
                     help="emit the alternating numerator (default)")
    grp.add_argument("--character", action="store_true", default=False,
                     help="emit the character instead")
    pc.set_defaults(fn=cmd_compute)

    pq = sub.add_parser("qdim", parents=[common, wspec],
                        help="graded dimension series of a character")
    pq.add_argument("--formula", required=True, choices=FORMULAS)
    pq.set_defaults(fn=cmd_qdim)

    pv = sub.add_parser("verify", parents=[common],
                        help="run named identity checks")
    pv.add_argument("checks", nargs="+", metavar="CHECK",
                    help="check names, or 'all'; known: " + ", ".join(CHECKS))
    pv.add_argument("--n", type=int, default=None,
                    help="colour count of the free-field frame")
    pv.add_argument("--s", type=int, default=None)
    pv.add_argument("--smax", type=int, default=None)
    pv.add_argument("--order", type=int, default=None)
    pv.add_argument("--omega", default=None,
                    help="window points, e.g. '0,0;1,2'")
    pv.add_argument("--cases", type=int, default=None,
                    help="cases per property suite")
    pv.add_argument("--type", default=None)
    pv.add_argument("--rank", type=int, default=None)
    pv.add_argument("--weight", type=int, nargs="+", default=None)
    pv.set_defaults(fn=cmd_verify)

    pl = sub.add_parser("list-deligne", parents=[common],
                        help="screen a window of weights for the "
                             "orthogonal-root setup")
    pl.add_argument("--type", required=True)
    pl.add_argument("--rank", type=int, required=True)
    pl.add_argument("--level", type=int, required=True)
    pl.add_argument("--window", type=int, default=None,
                    help="node coefficient bound; defaults to |level|")
    pl.set_defaults(fn=cmd_list_deligne)
    return par


def main(argv=None) -> int:
    par = _build_parser()
    args = par.parse_args(argv)
    if args.jobs < 1:
        par.error("--jobs must be >= 1")
    try:
        return args.fn(args)
    except (UsageError, ValueError, WeylSizeError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
