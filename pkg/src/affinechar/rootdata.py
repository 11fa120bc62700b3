"""Exact root-system data for the finite types A_l, C_l, D_4, E_6, E_7, E_8.

Everything is computed over Fraction from an explicit Euclidean model per
type, normalized so the highest root has squared length 2.  Weights are
handled in fundamental-weight coordinates (the tuple ((v|a_1^vee), ...,
(v|a_l^vee))), which are integral exactly on the weight lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Vec = tuple[Fraction, ...]


def _vec(entries) -> Vec:
    return tuple(Fraction(e) for e in entries)


def solve_linear(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve a small square system exactly by Gaussian elimination."""
    n = len(rows)
    aug = [list(rows[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def invert_matrix(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(rows)
    cols = []
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        cols.append(solve_linear(rows, e))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class PosRoot:
    fund: tuple[Fraction, ...]      # fundamental coordinates (v|a_i^vee)
    root_coords: tuple[int, ...]    # coefficients over the simple roots
    euclid: Vec
    height: int
    norm: Fraction                  # (alpha|alpha)


class RootSystem:
    """Immutable container of exact data for one finite root system."""

    def __init__(self, family: str, rank: int):
        self.family = family
        self.rank = rank
        self._build_euclid_model()
        self._derive()
        self._weyl_cache: list[WeylElement] | None = None

    # -- construction -----------------------------------------------------

    def _build_euclid_model(self) -> None:
        fam, l = self.family, self.rank
        one, half = Fraction(1), Fraction(1, 2)
        if fam == "A":
            dim = l + 1
            form = [one] * dim
            simples = [
                _vec([0] * i + [1, -1] + [0] * (dim - i - 2)) for i in range(l)
            ]
        elif fam == "C":
            dim = l
            form = [half] * dim
            simples = [
                _vec([0] * i + [1, -1] + [0] * (dim - i - 2)) for i in range(l - 1)
            ]
            simples.append(_vec([0] * (l - 1) + [2]))
        elif fam == "D":
            if l != 4:
                raise ValueError("only D_4 is supported")
            dim = 4
            form = [one] * 4
            # node 2 is the branch node: a_2 meets a_1, a_3, a_4
            simples = [
                _vec([1, -1, 0, 0]),
                _vec([0, 1, -1, 0]),
                _vec([0, 0, 1, -1]),
                _vec([0, 0, 1, 1]),
            ]
        elif fam == "E":
            if l not in (6, 7, 8):
                raise ValueError("E rank must be 6, 7 or 8")
            dim = 8
            form = [one] * 8
            e8 = [
                _vec([half, -half, -half, -half, -half, -half, -half, half]),
                _vec([1, 1, 0, 0, 0, 0, 0, 0]),
                _vec([-1, 1, 0, 0, 0, 0, 0, 0]),
                _vec([0, -1, 1, 0, 0, 0, 0, 0]),
                _vec([0, 0, -1, 1, 0, 0, 0, 0]),
                _vec([0, 0, 0, -1, 1, 0, 0, 0]),
                _vec([0, 0, 0, 0, -1, 1, 0, 0]),
                _vec([0, 0, 0, 0, 0, -1, 1, 0]),
            ]
            simples = e8[:l]
        else:
            raise ValueError(f"unknown family {fam!r}")
        self.ambient_dim = dim
        self._form = tuple(form)
        self.simple_euclid: tuple[Vec, ...] = tuple(simples)

    def euclid_inner(self, x: Vec, y: Vec) -> Fraction:
        return sum((a * b * f for a, b, f in zip(x, y, self._form)), Fraction(0))

    def _derive(self) -> None:
        l = self.rank
        inner = self.euclid_inner
        simples = self.simple_euclid

        def coroot(a: Vec) -> Vec:
            scale = Fraction(2) / inner(a, a)
            return tuple(scale * c for c in a)

        self.simple_coroots_euclid = tuple(coroot(a) for a in simples)

        # cartan[i][j] = (a_j | a_i^vee); fundamental coords of a_j = column j
        self.cartan = tuple(
            tuple(inner(simples[j], self.simple_coroots_euclid[i]) for j in range(l))
            for i in range(l)
        )
        if any(x.denominator != 1 for row in self.cartan for x in row):
            raise AssertionError("Cartan matrix must be integral")
        cartan_rows = [[Fraction(x) for x in row] for row in self.cartan]
        self._cartan_inv = invert_matrix(cartan_rows)

        # close the simple roots under simple reflections
        roots: set[Vec] = set(simples)
        frontier = list(simples)
        while frontier:
            nxt = []
            for b in frontier:
                for a, av in zip(simples, self.simple_coroots_euclid):
                    r = tuple(bc - inner(b, av) * ac for bc, ac in zip(b, a))
                    if r not in roots:
                        roots.add(r)
                        nxt.append(r)
            frontier = nxt

        def fund_coords(v: Vec) -> tuple[Fraction, ...]:
            return tuple(inner(v, av) for av in self.simple_coroots_euclid)

        self._fund_coords_euclid = fund_coords

        pos: list[PosRoot] = []
        for r in roots:
            fc = fund_coords(r)
            rc = solve_linear(cartan_rows, list(fc))
            if any(x.denominator != 1 for x in rc):
                raise AssertionError("root coordinates must be integral")
            rci = tuple(int(x) for x in rc)
            ht = sum(rci)
            if ht > 0:
                pos.append(PosRoot(fc, rci, r, ht, inner(r, r)))
        pos.sort(key=lambda p: (p.height, p.root_coords))
        self.positive_roots: tuple[PosRoot, ...] = tuple(pos)
        if 2 * len(pos) != len(roots):
            raise AssertionError("positive roots must be half of all roots")

        self.theta = pos[-1]
        if self.theta.norm != 2:
            raise AssertionError("normalization requires (theta|theta) = 2")
        self.marks = self.theta.root_coords
        # theta^vee = theta since (theta|theta) = 2; solve for its coroot coords
        theta_coroot_coords = solve_linear(
            [
                [inner(cv, av) for cv in self.simple_coroots_euclid]
                for av in self.simple_coroots_euclid
            ],
            [inner(self.theta.euclid, av) for av in self.simple_coroots_euclid],
        )
        if any(x.denominator != 1 for x in theta_coroot_coords):
            raise AssertionError("comarks must be integral")
        self.comarks = tuple(int(x) for x in theta_coroot_coords)
        self.dual_coxeter = 1 + sum(self.comarks)
        self.coxeter = 1 + self.theta.height
        self.delta_height = 1 + self.theta.height

        # fundamental weights in the Euclidean span of the simple roots
        pairing_rows = [
            [inner(simples[k], self.simple_coroots_euclid[j]) for k in range(l)]
            for j in range(l)
        ]
        fund_weights = []
        for i in range(l):
            e = [Fraction(int(j == i)) for j in range(l)]
            xs = solve_linear(pairing_rows, e)
            w = tuple(
                sum((xs[k] * simples[k][d] for k in range(l)), Fraction(0))
                for d in range(self.ambient_dim)
            )
            fund_weights.append(w)
        self.fund_weights_euclid: tuple[Vec, ...] = tuple(fund_weights)
        self.gram = tuple(
            tuple(inner(fund_weights[i], fund_weights[j]) for j in range(l))
            for i in range(l)
        )
        self.rho = tuple(Fraction(1) for _ in range(l))

        # fundamental coords of simple roots and coroots (integral)
        self.simple_fund = tuple(
            tuple(self.cartan[i][j] for i in range(l)) for j in range(l)
        )
        self.coroot_fund = tuple(
            fund_coords(cv) for cv in self.simple_coroots_euclid
        )
        if any(x.denominator != 1 for v in self.coroot_fund for x in v):
            raise AssertionError("coroot fundamental coordinates must be integral")

    # -- exact pairings on fundamental coordinates ------------------------

    def inner(self, x, y) -> Fraction:
        g = self.gram
        return sum(
            (Fraction(xi) * Fraction(yj) * g[i][j]
             for i, xi in enumerate(x) if xi
             for j, yj in enumerate(y) if yj),
            Fraction(0),
        )

    def norm(self, x) -> Fraction:
        return self.inner(x, x)

    def root_to_fund(self, root_coords) -> tuple[Fraction, ...]:
        l = self.rank
        return tuple(
            sum((Fraction(root_coords[j]) * self.cartan[i][j] for j in range(l)),
                Fraction(0))
            for i in range(l)
        )

    def fund_to_root(self, fund) -> tuple[Fraction, ...]:
        inv = self._cartan_inv
        l = self.rank
        return tuple(
            sum((inv[i][j] * Fraction(fund[j]) for j in range(l)), Fraction(0))
            for i in range(l)
        )

    def euclid_to_fund(self, v: Vec) -> tuple[Fraction, ...]:
        return self._fund_coords_euclid(_vec(v))

    # -- Weyl group --------------------------------------------------------

    def simple_reflection(self, i: int) -> "WeylElement":
        l = self.rank
        rows = []
        for j in range(l):
            row = [int(j == k) for k in range(l)]
            row[i] -= int(self.cartan[j][i])
            rows.append(tuple(row))
        return WeylElement(tuple(rows), -1)

    def weyl_group(self, limit: int = 10**6,
                   allow_large: bool = False) -> list["WeylElement"]:
        """Full Weyl group as integer matrices on fundamental coordinates.

        Groups larger than `limit` are refused unless allow_large is set;
        E_7 and E_8 are the only supported types past the default bound.
        """
        if self._weyl_cache is not None:
            return self._weyl_cache
        gens = [self.simple_reflection(i) for i in range(self.rank)]
        ident = WeylElement(
            tuple(tuple(int(i == j) for j in range(self.rank))
                  for i in range(self.rank)),
            1,
        )
        seen = {ident.matrix: ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for w in frontier:
                for g in gens:
                    wg = w.compose(g)
                    if wg.matrix not in seen:
                        if len(seen) >= limit and not allow_large:
                            raise WeylSizeError(
                                f"Weyl group exceeds {limit} elements; "
                                "pass allow_large to enumerate anyway"
                            )
                        seen[wg.matrix] = wg
                        nxt.append(wg)
            frontier = nxt
        self._weyl_cache = list(seen.values())
        return self._weyl_cache

    def to_dominant(self, fund) -> tuple[tuple[Fraction, ...], int, bool]:
        """Reflect into the dominant chamber.

        Returns (dominant representative, sign of the element used, regular)
        where regular is False when the weight has a zero coordinate along
        the way (i.e. a reflection stabilizes it).
        """
        v = tuple(Fraction(x) for x in fund)
        sign = 1
        while True:
            for i, c in enumerate(v):
                if c < 0:
                    alpha = self.simple_fund[i]
                    v = tuple(a - c * b for a, b in zip(v, alpha))
                    sign = -sign
                    break
            else:
                return v, sign, all(c != 0 for c in v)

    def weyl_dim(self, fund) -> Fraction:
        """Dimension of the irreducible with highest weight `fund` (Weyl)."""
        lam_rho = tuple(Fraction(x) + 1 for x in fund)
        num = Fraction(1)
        den = Fraction(1)
        for a in self.positive_roots:
            num *= self.inner(lam_rho, a.fund)
            den *= self.inner(self.rho, a.fund)
        return num / den


class WeylSizeError(RuntimeError):
    pass


@dataclass(frozen=True)
class WeylElement:
    matrix: tuple[tuple[int, ...], ...]   # acts on fundamental coordinates
    sign: int

    def apply(self, v):
        return tuple(
            sum((Fraction(row[j]) * Fraction(v[j]) for j in range(len(row))
                 if v[j]), Fraction(0))
            for row in self.matrix
        )

    def compose(self, other: "WeylElement") -> "WeylElement":
        a, b = self.matrix, other.matrix
        n = len(a)
        rows = tuple(
            tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
            for i in range(n)
        )
        return WeylElement(rows, self.sign * other.sign)


def root_system(family: str, rank: int) -> RootSystem:
    return RootSystem(family, rank)


def gamma_basis_C(rs: RootSystem) -> list[tuple[Fraction, ...]]:
    """Basis gamma_i = 2*eps_i of the translation lattice for type C.

    gamma_i = a_i^vee + ... + a_l^vee; returned in fundamental coordinates.
    """
    if rs.family != "C":
        raise ValueError("gamma basis only defined for type C here")
    l = rs.rank
    out = []
    for i in range(l):
        acc = [Fraction(0)] * l
        for j in range(i, l):
            acc = [a + b for a, b in zip(acc, rs.coroot_fund[j])]
        out.append(tuple(acc))
    return out


def coroot_lattice_basis(rs: RootSystem) -> list[tuple[Fraction, ...]]:
    """Basis of the coroot lattice in fundamental coordinates."""
    return [tuple(v) for v in rs.coroot_fund]


def root_lattice_basis(rs: RootSystem) -> list[tuple[Fraction, ...]]:
    return [tuple(v) for v in rs.simple_fund]
