"""Truncated exponential series on affine weight cones, exact over Z.

A series is a finite Z-linear combination of formal exponentials

    e^{base - k_0 m_0 - k_1 m_1 - ... }        (all k_i >= 0)

where the m_i are the simple monomial directions of a frame (for an affine
root system: alpha_0 = delta - theta and the finite simple roots).  Terms
are stored by cone height sum(k_i) and are exact up to the stated order;
nothing above the order is kept.  Keys are packed into single integers,
eight bits per exponent, so multiplication stays cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .rootdata import RootSystem

_SHIFT = 8
_MASK = (1 << _SHIFT) - 1
MAX_ORDER = _MASK // 2  # per-exponent packing bound


def pack(exps) -> int:
    key = 0
    for i, k in enumerate(exps):
        if k < 0 or k > _MASK:
            raise ValueError(f"exponent {k} out of packing range")
        key |= k << (_SHIFT * i)
    return key


def unpack(key: int, nvars: int) -> tuple[int, ...]:
    return tuple((key >> (_SHIFT * i)) & _MASK for i in range(nvars))


@dataclass(frozen=True)
class AffineWeight:
    """Weight of the extended algebra: finite part, level, delta coefficient.

    The finite part is in fundamental coordinates of the underlying finite
    root system (or a frame-specific encoding for the super frames).
    """

    finite: tuple[Fraction, ...]
    level: Fraction
    delta: Fraction

    @staticmethod
    def make(finite, level=0, delta=0) -> "AffineWeight":
        return AffineWeight(
            tuple(Fraction(x) for x in finite), Fraction(level), Fraction(delta)
        )

    def __add__(self, other: "AffineWeight") -> "AffineWeight":
        return AffineWeight(
            tuple(a + b for a, b in zip(self.finite, other.finite)),
            self.level + other.level,
            self.delta + other.delta,
        )

    def __sub__(self, other: "AffineWeight") -> "AffineWeight":
        return AffineWeight(
            tuple(a - b for a, b in zip(self.finite, other.finite)),
            self.level - other.level,
            self.delta - other.delta,
        )

    def scale(self, c) -> "AffineWeight":
        c = Fraction(c)
        return AffineWeight(
            tuple(c * x for x in self.finite), c * self.level, c * self.delta
        )


def affine_inner(rs: RootSystem, x: AffineWeight, y: AffineWeight) -> Fraction:
    return rs.inner(x.finite, y.finite) + x.level * y.delta + y.level * x.delta


def rho_hat(rs: RootSystem) -> AffineWeight:
    return AffineWeight.make(rs.rho, rs.dual_coxeter, 0)


def fundamental_affine_weight(rs: RootSystem, i: int) -> AffineWeight:
    """Lambda_i = comark_i * Lambda_0 + bar-Lambda_i; i = 0 gives Lambda_0."""
    if i == 0:
        return AffineWeight.make((0,) * rs.rank, 1, 0)
    fin = tuple(Fraction(int(j == i - 1)) for j in range(rs.rank))
    return AffineWeight.make(fin, rs.comarks[i - 1], 0)


def weight_from_coeffs(rs: RootSystem, coeffs, delta=0) -> AffineWeight:
    """Weight m_0 Lambda_0 + sum_i m_i Lambda_i + delta * delta-direction."""
    if len(coeffs) != rs.rank + 1:
        raise ValueError("need rank+1 coefficients")
    level = Fraction(coeffs[0]) + sum(
        Fraction(coeffs[i + 1]) * rs.comarks[i] for i in range(rs.rank)
    )
    fin = tuple(Fraction(c) for c in coeffs[1:])
    return AffineWeight(fin, level, Fraction(delta))


def translate(rs: RootSystem, w: AffineWeight, gamma) -> AffineWeight:
    """Lattice translation t_gamma acting on a weight of level w.level."""
    g = tuple(Fraction(x) for x in gamma)
    k = w.level
    fin = tuple(a + k * b for a, b in zip(w.finite, g))
    drop = rs.inner(w.finite, g) + k * rs.norm(g) / 2
    return AffineWeight(fin, k, w.delta - drop)


class ExpSeries:
    """Height-truncated series on a cone frame with nvars directions."""

    __slots__ = ("nvars", "base", "order", "by_height", "q_half")

    def __init__(self, nvars: int, base: AffineWeight, order: int,
                 q_half: bool = False):
        if order > MAX_ORDER:
            raise ValueError(f"order {order} exceeds packing bound {MAX_ORDER}")
        self.nvars = nvars
        self.base = base
        self.order = order
        self.q_half = q_half
        self.by_height: list[dict[int, int]] = [dict() for _ in range(order + 1)]

    # -- construction ------------------------------------------------------

    @staticmethod
    def one(nvars: int, base: AffineWeight, order: int,
            q_half: bool = False) -> "ExpSeries":
        s = ExpSeries(nvars, base, order, q_half)
        s.by_height[0][0] = 1
        return s

    def add_term(self, exps, coeff: int) -> None:
        h = sum(exps)
        if h <= self.order and coeff:
            key = pack(exps)
            bucket = self.by_height[h]
            c = bucket.get(key, 0) + coeff
            if c:
                bucket[key] = c
            else:
                bucket.pop(key, None)

    def copy(self) -> "ExpSeries":
        s = ExpSeries(self.nvars, self.base, self.order, self.q_half)
        s.by_height = [dict(b) for b in self.by_height]
        return s

    # -- ring operations ---------------------------------------------------

    def _check_frame(self, other: "ExpSeries") -> None:
        if self.nvars != other.nvars or self.q_half != other.q_half:
            raise ValueError("incompatible series frames")

    def __add__(self, other: "ExpSeries") -> "ExpSeries":
        self._check_frame(other)
        if other.base != self.base:
            raise ValueError("series bases differ; cannot add")
        order = min(self.order, other.order)
        s = ExpSeries(self.nvars, self.base, order, self.q_half)
        for h in range(order + 1):
            b = dict(self.by_height[h])
            for k, c in other.by_height[h].items():
                nc = b.get(k, 0) + c
                if nc:
                    b[k] = nc
                else:
                    b.pop(k, None)
            s.by_height[h] = b
        return s

    def __neg__(self) -> "ExpSeries":
        s = ExpSeries(self.nvars, self.base, self.order, self.q_half)
        s.by_height = [{k: -c for k, c in b.items()} for b in self.by_height]
        return s

    def __sub__(self, other: "ExpSeries") -> "ExpSeries":
        return self + (-other)

    def scalar_mul(self, c: int) -> "ExpSeries":
        s = ExpSeries(self.nvars, self.base, self.order, self.q_half)
        if c:
            s.by_height = [{k: c * v for k, v in b.items()} for b in self.by_height]
        return s

    def __mul__(self, other: "ExpSeries") -> "ExpSeries":
        self._check_frame(other)
        order = min(self.order, other.order)
        s = ExpSeries(self.nvars, self.base + other.base, order, self.q_half)
        out = s.by_height
        for h1 in range(min(self.order, order) + 1):
            b1 = self.by_height[h1]
            if not b1:
                continue
            for h2 in range(min(other.order, order - h1) + 1):
                b2 = other.by_height[h2]
                if not b2:
                    continue
                tgt = out[h1 + h2]
                for k1, c1 in b1.items():
                    for k2, c2 in b2.items():
                        k = k1 + k2
                        c = tgt.get(k, 0) + c1 * c2
                        if c:
                            tgt[k] = c
                        else:
                            del tgt[k]
        return s

    def mul_one_minus(self, exps, sign: int = 1) -> None:
        """Multiply in place by (1 - sign * e-monomial(exps))."""
        key = pack(exps)
        dh = sum(exps)
        if dh == 0:
            raise ValueError("factor must raise the height")
        for h in range(self.order - dh, -1, -1):
            tgt = self.by_height[h + dh]
            for k, c in self.by_height[h].items():
                kk = k + key
                nc = tgt.get(kk, 0) - sign * c
                if nc:
                    tgt[kk] = nc
                else:
                    tgt.pop(kk, None)

    def mul_geometric(self, exps, sign: int = 1) -> None:
        """Multiply in place by (1 - sign * e-monomial(exps))^{-1}."""
        key = pack(exps)
        dh = sum(exps)
        if dh == 0:
            raise ValueError("factor must raise the height")
        for h in range(0, self.order - dh + 1):
            tgt = self.by_height[h + dh]
            for k, c in self.by_height[h].items():
                kk = k + key
                nc = tgt.get(kk, 0) + sign * c
                if nc:
                    tgt[kk] = nc
                else:
                    tgt.pop(kk, None)

    def invert(self) -> "ExpSeries":
        """Inverse as a truncated series; constant term must be a unit."""
        c0 = self.by_height[0].get(0, 0)
        if len(self.by_height[0]) != 1 or c0 not in (1, -1):
            raise ValueError("constant term must be +-1 to invert over Z")
        inv = ExpSeries(self.nvars, self.base.scale(-1), self.order, self.q_half)
        inv.by_height[0][0] = c0
        for h in range(1, self.order + 1):
            tgt = inv.by_height[h]
            for hf in range(1, h + 1):
                bf = self.by_height[hf]
                if not bf:
                    continue
                bg = inv.by_height[h - hf]
                for kf, cf in bf.items():
                    for kg, cg in bg.items():
                        k = kf + kg
                        c = tgt.get(k, 0) - cf * cg
                        if c:
                            tgt[k] = c
                        else:
                            del tgt[k]
            if c0 == -1:
                for k in list(tgt):
                    tgt[k] = -tgt[k]
        return inv

    # -- queries -----------------------------------------------------------

    def coeff(self, exps) -> int:
        h = sum(exps)
        if h > self.order:
            raise ValueError("exponent beyond truncation order")
        return self.by_height[h].get(pack(exps), 0)

    def n_terms(self) -> int:
        return sum(len(b) for b in self.by_height)

    def restrict(self, order: int) -> "ExpSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        s = ExpSeries(self.nvars, self.base, order, self.q_half)
        s.by_height = [dict(b) for b in self.by_height[: order + 1]]
        return s

    def sorted_items(self) -> list[tuple[tuple[int, ...], int]]:
        out = []
        for b in self.by_height:
            for k, c in b.items():
                out.append((unpack(k, self.nvars), c))
        out.sort(key=lambda t: t[0])
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExpSeries):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.base == other.base
            and self.order == other.order
            and self.q_half == other.q_half
            and self.by_height == other.by_height
        )

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        terms = [
            {"exps": list(e), "coeff": str(c)} for e, c in self.sorted_items()
        ]
        return {
            "base": [str(x) for x in self.base.finite],
            "level": str(self.base.level),
            "delta": str(self.base.delta),
            "order": self.order,
            "q_half": self.q_half,
            "terms": terms,
        }

    @staticmethod
    def from_json_dict(d: dict, nvars: int | None = None) -> "ExpSeries":
        base = AffineWeight.make(
            [Fraction(x) for x in d["base"]], Fraction(d["level"]),
            Fraction(d["delta"])
        )
        if nvars is None:
            if d["terms"]:
                nvars = len(d["terms"][0]["exps"])
            else:
                nvars = len(d["base"]) + 1
        s = ExpSeries(nvars, base, int(d["order"]), bool(d["q_half"]))
        for t in d["terms"]:
            s.add_term(tuple(int(x) for x in t["exps"]), int(t["coeff"]))
        return s

    def to_tsv_lines(self) -> list[str]:
        head = "\t".join(f"k{i}" for i in range(self.nvars)) + "\tcoeff"
        rows = [
            "\t".join(str(x) for x in e) + f"\t{c}" for e, c in self.sorted_items()
        ]
        return [head] + rows


# -- affine denominator as a cone series ------------------------------------


def affine_factor_list(rs: RootSystem, order: int):
    """All factors of e^{-rho-hat} R-hat up to cone height `order`.

    Yields (exps, kind) where kind is +1 for a plain (1 - e^m) factor and
    the factor count of q^k eta-type factors is the rank.
    """
    marks = (1,) + tuple(rs.marks)
    htd = rs.delta_height
    out = []
    # imaginary roots: (1 - q^k)^rank
    k = 1
    while k * htd <= order:
        exps = tuple(k * m for m in marks)
        for _ in range(rs.rank):
            out.append(exps)
        k += 1
    # real roots: alpha + k delta and (delta - alpha) + k delta
    for a in rs.positive_roots:
        rc = a.root_coords
        # e^{-(alpha + k delta)}: exps = k*marks + (0, rc)
        k = 0
        while k * htd + a.height <= order:
            exps = tuple(k * m for m in marks)
            exps = (exps[0],) + tuple(
                exps[i + 1] + rc[i] for i in range(rs.rank)
            )
            out.append(exps)
            k += 1
        # e^{-(k delta - alpha)}: exps = k*marks - (0, rc), k >= 1
        k = 1
        while k * htd - a.height <= order:
            exps = tuple(k * m for m in marks)
            exps = (exps[0],) + tuple(
                exps[i + 1] - rc[i] for i in range(rs.rank)
            )
            if any(x < 0 for x in exps):
                raise AssertionError("real root factor left the cone")
            out.append(exps)
            k += 1
    return out


def denominator_series(rs: RootSystem, order: int) -> ExpSeries:
    """e^{-rho-hat} R-hat expanded on the affine cone up to `order`."""
    base = AffineWeight.make((0,) * rs.rank, 0, 0)
    s = ExpSeries.one(rs.rank + 1, base, order)
    for exps in affine_factor_list(rs, order):
        s.mul_one_minus(exps)
    return s


# -- q-sliced characters -----------------------------------------------------


class SliceError(ValueError):
    pass


class CharSlices:
    """A weight-graded object complete per q-power.

    slices[m] maps a finite offset (root coordinates relative to base) to
    its integer multiplicity at e^{base - m delta + offset}.
    """

    __slots__ = ("rs", "base", "qmax", "slices")

    def __init__(self, rs: RootSystem, base: AffineWeight, qmax: int,
                 slices: dict[int, dict[tuple[int, ...], int]] | None = None):
        self.rs = rs
        self.base = base
        self.qmax = qmax
        self.slices = slices if slices is not None else {}

    @staticmethod
    def from_raw(rs: RootSystem, base: AffineWeight, raw: dict, qmax: int,
                 allow_negative: bool = False) -> "CharSlices":
        """Build from {(m, offset): coeff}; negative-m content must cancel."""
        slices: dict[int, dict[tuple[int, ...], int]] = {}
        for (m, off), c in raw.items():
            if c == 0:
                continue
            if m < 0 and not allow_negative:
                raise SliceError(
                    f"uncancelled term at negative q-power {m}: {off} -> {c}"
                )
            if m > qmax:
                continue
            slices.setdefault(m, {})
            nc = slices[m].get(off, 0) + c
            if nc:
                slices[m][off] = nc
            else:
                del slices[m][off]
        return CharSlices(rs, base, qmax, {m: b for m, b in slices.items() if b})

    def coeff(self, m: int, off) -> int:
        return self.slices.get(m, {}).get(tuple(off), 0)

    def slice_dim(self, m: int) -> int:
        return sum(self.slices.get(m, {}).values())

    def q_series(self) -> list[int]:
        return [self.slice_dim(m) for m in range(self.qmax + 1)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, CharSlices):
            return NotImplemented
        return (
            self.base == other.base
            and self.qmax == other.qmax
            and {m: b for m, b in self.slices.items() if b}
            == {m: b for m, b in other.slices.items() if b}
        )

    def _combine(self, other: "CharSlices", sign: int) -> "CharSlices":
        if self.base != other.base:
            raise ValueError("bases differ")
        qmax = min(self.qmax, other.qmax)
        out: dict[int, dict[tuple[int, ...], int]] = {}
        for m in set(self.slices) | set(other.slices):
            if m > qmax:
                continue
            b = dict(self.slices.get(m, {}))
            for k, c in other.slices.get(m, {}).items():
                nc = b.get(k, 0) + sign * c
                if nc:
                    b[k] = nc
                else:
                    b.pop(k, None)
            if b:
                out[m] = b
        return CharSlices(self.rs, self.base, qmax, out)

    def __sub__(self, other: "CharSlices") -> "CharSlices":
        return self._combine(other, -1)

    def __add__(self, other: "CharSlices") -> "CharSlices":
        return self._combine(other, 1)

    def mul_qpoly(self, qpoly: dict[int, int]) -> "CharSlices":
        """Multiply by a one-variable q-series {power: coeff}, power >= 0."""
        out: dict[int, dict[tuple[int, ...], int]] = {}
        for m, b in self.slices.items():
            for j, c in qpoly.items():
                if j < 0:
                    raise ValueError("q-poly must have nonnegative powers")
                if m + j > self.qmax:
                    continue
                tgt = out.setdefault(m + j, {})
                for off, v in b.items():
                    nc = tgt.get(off, 0) + v * c
                    if nc:
                        tgt[off] = nc
                    else:
                        del tgt[off]
        return CharSlices(self.rs, self.base, self.qmax,
                          {m: b for m, b in out.items() if b})

    def halve(self) -> "CharSlices":
        out = {}
        for m, b in self.slices.items():
            for off, v in b.items():
                if v % 2:
                    raise SliceError(f"odd coefficient {v} at {m}, {off}")
            out[m] = {off: v // 2 for off, v in b.items()}
        return CharSlices(self.rs, self.base, self.qmax, out)

    def rebase(self, new_base: AffineWeight, m_shift: int,
               off_shift) -> "CharSlices":
        """Re-express relative to new_base = base - m_shift*delta + off_shift.

        off_shift is in root coordinates; slice m at offset o becomes slice
        m - m_shift at offset o - off_shift.
        """
        off_shift = tuple(off_shift)
        out: dict[int, dict[tuple[int, ...], int]] = {}
        for m, b in self.slices.items():
            nm = m - m_shift
            if nm < 0:
                raise SliceError("rebase produced a negative q-power")
            out[nm] = {
                tuple(a - d for a, d in zip(off, off_shift)): v
                for off, v in b.items()
            }
        return CharSlices(self.rs, new_base, self.qmax - m_shift, out)

    def is_weyl_invariant(self) -> bool:
        """Each q-slice, read as weights base.finite + offset, is W-stable."""
        rs = self.rs
        for m, b in self.slices.items():
            for i in range(rs.rank):
                refl = rs.simple_reflection(i)
                moved: dict[tuple[int, ...], int] = {}
                for off, c in b.items():
                    mu = tuple(
                        Fraction(o) + f
                        for o, f in zip(rs.root_to_fund(off), self.base.finite)
                    )
                    nu = refl.apply(mu)
                    noff = rs.fund_to_root(
                        tuple(a - f for a, f in zip(nu, self.base.finite))
                    )
                    if any(x.denominator != 1 for x in noff):
                        return False
                    moved[tuple(int(x) for x in noff)] = c
                if moved != b:
                    return False
        return True

    def to_series(self) -> ExpSeries:
        """Re-express on the affine cone; fails if support leaves the cone."""
        rs = self.rs
        marks = tuple(rs.marks)
        order_needed = 0
        items = []
        for m, b in sorted(self.slices.items()):
            for off, c in sorted(b.items()):
                exps = (m,) + tuple(m * marks[i] - off[i] for i in range(rs.rank))
                if any(x < 0 for x in exps):
                    raise SliceError(
                        f"slice {m} offset {off} is outside the highest-weight cone"
                    )
                order_needed = max(order_needed, sum(exps))
                items.append((exps, c))
        s = ExpSeries(rs.rank + 1, self.base, order_needed)
        for exps, c in items:
            s.add_term(exps, c)
        return s

    def to_json_dict(self) -> dict:
        rs = self.rs
        terms = []
        for m in sorted(self.slices):
            for off in sorted(self.slices[m]):
                terms.append(
                    {
                        "exps": [m, *off],
                        "coeff": str(self.slices[m][off]),
                    }
                )
        return {
            "base": [str(x) for x in self.base.finite],
            "level": str(self.base.level),
            "delta": str(self.base.delta),
            "order": self.qmax,
            "q_half": False,
            "terms": terms,
        }

    @staticmethod
    def from_json_dict(rs: RootSystem, d: dict) -> "CharSlices":
        base = AffineWeight.make(
            [Fraction(x) for x in d["base"]], Fraction(d["level"]),
            Fraction(d["delta"])
        )
        slices: dict[int, dict[tuple[int, ...], int]] = {}
        for t in d["terms"]:
            m = int(t["exps"][0])
            off = tuple(int(x) for x in t["exps"][1:])
            slices.setdefault(m, {})[off] = int(t["coeff"])
        return CharSlices(rs, base, int(d["order"]), slices)


def phi_slices(qmax: int, step: int = 1) -> dict[int, int]:
    """q-power coefficients of prod_{k>=1} (1 - q^{step k}) up to qmax."""
    coeffs = {0: 1}
    k = step
    while k <= qmax:
        nxt = dict(coeffs)
        for m, c in coeffs.items():
            if m + k <= qmax:
                nxt[m + k] = nxt.get(m + k, 0) - c
                if not nxt[m + k]:
                    del nxt[m + k]
        coeffs = nxt
        k += step
    return coeffs


def qpoly_mul(a: dict[int, int], b: dict[int, int],
              qmax: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for m, c in a.items():
        for j, d in b.items():
            if m + j > qmax:
                continue
            nc = out.get(m + j, 0) + c * d
            if nc:
                out[m + j] = nc
            else:
                del out[m + j]
    return out


def qpoly_invert(a: dict[int, int], qmax: int) -> dict[int, int]:
    """Invert a q-series with constant term +-1, truncated at qmax."""
    a0 = a.get(0, 0)
    if a0 not in (1, -1):
        raise SliceError("constant term must be a unit")
    out = {0: a0}
    for m in range(1, qmax + 1):
        acc = 0
        for j, c in a.items():
            if 0 < j <= m:
                acc += c * out.get(m - j, 0)
        if acc:
            out[m] = -a0 * acc
    return out

def denominator_slices(rs: RootSystem, qmax: int) -> dict[int, dict[tuple[int, ...], int]]:
    """q-slices of e^{-rho-hat} R-hat; offsets in root coordinates."""
    slices: dict[int, dict[tuple[int, ...], int]] = {0: {(0,) * rs.rank: 1}}

    def mul_two_term(j: int, off: tuple[int, ...]) -> None:
        # multiply by (1 - e^{off} q^j)
        nonlocal slices
        out: dict[int, dict[tuple[int, ...], int]] = {}
        for m, b in slices.items():
            for o, c in b.items():
                tgt = out.setdefault(m, {})
                tgt[o] = tgt.get(o, 0) + c
                if not tgt[o]:
                    del tgt[o]
                if m + j <= qmax:
                    no = tuple(a + d for a, d in zip(o, off))
                    tgt2 = out.setdefault(m + j, {})
                    tgt2[no] = tgt2.get(no, 0) - c
                    if not tgt2[no]:
                        del tgt2[no]
        slices = out

    zero = (0,) * rs.rank
    for a in rs.positive_roots:
        mrc = tuple(-x for x in a.root_coords)
        mul_two_term(0, mrc)
        for k in range(1, qmax + 1):
            mul_two_term(k, mrc)
            mul_two_term(k, a.root_coords)
    for k in range(1, qmax + 1):
        for _ in range(rs.rank):
            mul_two_term(k, zero)
    return slices


def finite_weyl_denominator(rs: RootSystem) -> dict[tuple[int, ...], int]:
    """prod_{alpha > 0} (1 - e^{-alpha}) as offsets in root coordinates."""
    poly = {(0,) * rs.rank: 1}
    for a in rs.positive_roots:
        out = dict(poly)
        for o, c in poly.items():
            no = tuple(x - y for x, y in zip(o, a.root_coords))
            out[no] = out.get(no, 0) - c
            if not out[no]:
                del out[no]
        poly = out
    return poly


def laurent_divide(num: dict[tuple[int, ...], int],
                   den: dict[tuple[int, ...], int],
                   budget: int = 10**6) -> dict[tuple[int, ...], int]:
    """Exact division of finite Laurent polynomials in root coordinates.

    `den` must have a unique height-maximal term with coefficient +-1 (the
    finite Weyl denominator has leading term 1 at the origin).  Raises
    SliceError if the division does not come out exact within the budget.
    """
    lead = max(den, key=lambda o: (sum(o), o))
    lc = den[lead]
    if lc not in (1, -1):
        raise SliceError("denominator leading coefficient must be a unit")
    rest = [(o, c) for o, c in den.items() if o != lead]
    if any(sum(o) >= sum(lead) for o, _ in rest):
        raise SliceError("denominator needs a unique height-maximal term")
    num = dict(num)
    quo: dict[tuple[int, ...], int] = {}
    steps = 0
    while num:
        o = max(num, key=lambda t: (sum(t), t))
        c = num.pop(o) * lc
        qo = tuple(a - b for a, b in zip(o, lead))
        quo[qo] = quo.get(qo, 0) + c
        for ro, rc in rest:
            t = tuple(a + b for a, b in zip(qo, ro))
            nc = num.get(t, 0) - c * rc
            if nc:
                num[t] = nc
            else:
                num.pop(t, None)
        steps += 1
        if steps > budget:
            raise SliceError("Laurent division exceeded its budget")
    return quo


def character_from_numerator(rs: RootSystem, base: AffineWeight,
                             numerator: "CharSlices",
                             qmax: int | None = None) -> "CharSlices":
    """Solve R-hat * ch = numerator slice by slice.

    ch_m = (N_m - sum_{j=1..m} D_j ch_{m-j}) / D_0 where D is the sliced
    denominator and D_0 the finite Weyl denominator.
    """
    if qmax is None:
        qmax = numerator.qmax
    dsl = denominator_slices(rs, qmax)
    d0 = dsl[0]
    if d0 != finite_weyl_denominator(rs):
        raise AssertionError("denominator zero-slice mismatch")
    out: dict[int, dict[tuple[int, ...], int]] = {}
    for m in range(qmax + 1):
        acc = dict(numerator.slices.get(m, {}))
        for j in range(1, m + 1):
            dj = dsl.get(j)
            chmj = out.get(m - j)
            if not dj or not chmj:
                continue
            for o1, c1 in dj.items():
                for o2, c2 in chmj.items():
                    t = tuple(a + b for a, b in zip(o1, o2))
                    nc = acc.get(t, 0) - c1 * c2
                    if nc:
                        acc[t] = nc
                    else:
                        acc.pop(t, None)
        q = laurent_divide(acc, d0)
        if q:
            out[m] = q
    return CharSlices(rs, base, qmax, out)
