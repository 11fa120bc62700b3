"""The free-field model: state enumeration against product expansions."""

import pytest

from affinechar.fock import (
    BudgetError,
    charge_energy_table,
    charge_sector_character,
    charge_sector_character_sp,
    charge_zero_split,
    fock_gl_slices,
    fock_product_table,
    fock_states,
    fold_weight,
    mirror_pair_slices,
    mirror_state,
    oscillator_split,
    oscillator_split_brute,
    sp_root_coords,
    split_to_char,
    state_energy2,
    state_weight,
)
from affinechar.rootdata import root_system
from affinechar.series import phi_slices, qpoly_invert, qpoly_mul


# -- enumeration vs the two product expansions ----------------------------------


def test_one_colour_low_energy_by_hand():
    # e2 counts doubled energies; modes sit at odd e2 = 1, 3, 5, ...
    sts = fock_states(1, 0, 2)
    assert len(sts) == 2  # vacuum and one raising-lowering pair at e2 = 2
    assert sorted(state_energy2(s) for s in sts) == [0, 2]
    assert all(state_weight(1, s) == (0,) for s in sts)
    sts = fock_states(1, 1, 3)
    # one phi at k2 = 1 or 3, or phi(1)phi(1)phistar(1): 3 states
    assert len(sts) == 3


def test_counts_match_charge_energy_table():
    for n in (1, 2, 3):
        e2max = 6
        tbl = charge_energy_table(n, e2max)
        got: dict[tuple[int, int], int] = {}
        for s in range(-e2max, e2max + 1):
            for st in fock_states(n, s, e2max):
                key = (s, state_energy2(st))
                got[key] = got.get(key, 0) + 1
        assert got == {k: v for k, v in tbl.items() if v}


def test_total_dims_from_eta_quotient():
    # summing the table over charges must reproduce
    # prod_{k odd} (1-q^k)^{-2n} = (phi(q^2)/phi(q))^{2n}
    for n in (1, 2, 3):
        e2max = 8
        tbl = charge_energy_table(n, e2max)
        tot = {}
        for (s, e2), c in tbl.items():
            tot[e2] = tot.get(e2, 0) + c
        ratio = qpoly_mul(
            phi_slices(e2max, 2), qpoly_invert(phi_slices(e2max), e2max), e2max
        )
        want = {0: 1}
        for _ in range(2 * n):
            want = qpoly_mul(want, ratio, e2max)
        assert tot == want


@pytest.mark.parametrize("n", [2, 3])
def test_weighted_slices_match_product_table(n):
    e2max = 6
    tbl = fock_product_table(n, e2max)
    for s in (-2, -1, 0, 1, 2):
        want: dict[int, dict[tuple[int, ...], int]] = {}
        for (ch, e2, w), c in tbl.items():
            if ch == s and c:
                b = want.setdefault(e2, {})
                b[w] = b.get(w, 0) + c
        got = fock_gl_slices(n, s, e2max)
        assert got == {e2: b for e2, b in want.items() if b}


def test_opposite_charge_is_the_dual():
    # swapping the two families negates every weight at the same energy
    for n in (2, 3):
        for s in (1, 2):
            a = fock_gl_slices(n, s, 5 + s)
            b = fock_gl_slices(n, -s, 5 + s)
            flipped = {
                e2: {tuple(-x for x in w): c for w, c in bl.items()}
                for e2, bl in b.items()
            }
            assert a == flipped


def test_budget_guard_fires():
    with pytest.raises(BudgetError):
        fock_states(3, 0, 10, budget=5)


# -- sector characters -----------------------------------------------------------


def test_sector_character_undoes_the_oscillator():
    # the character's q-series convolved with the partition series must
    # return the raw sector dimensions
    rs = root_system("A", 2)
    n, qmax = 3, 4
    tbl = charge_energy_table(n, 2 * qmax + 2)
    for s in (0, 1, 2):
        ch = charge_sector_character(rs, s, qmax)
        assert ch.coeff(0, (0, 0)) == 1
        qs = {m: c for m, c in enumerate(ch.q_series())}
        conv = qpoly_mul(qs, qpoly_invert(phi_slices(qmax), qmax), qmax)
        want = {m: tbl.get((s, s + 2 * m), 0) for m in range(qmax + 1)}
        assert conv == {m: c for m, c in want.items() if c}


def test_sector_character_base_weights():
    rs = root_system("A", 2)
    ch = charge_sector_character(rs, 2, 2)
    assert ch.base.level == -1
    assert ch.base.finite == (2, 0)
    with pytest.raises(ValueError):
        charge_sector_character(rs, -1, 2)
    with pytest.raises(ValueError):
        charge_sector_character(root_system("C", 2), 0, 2)


def test_sp_sector_character_base_weights():
    rs = root_system("C", 2)
    ch = charge_sector_character_sp(rs, 1, 2)
    assert ch.base.level == -1 and ch.base.finite == (1, 0)
    assert ch.coeff(0, (0, 0)) == 1
    with pytest.raises(ValueError):
        charge_sector_character_sp(root_system("A", 2), 0, 2)


# -- the diagram flip on charge zero ----------------------------------------------


def test_mirror_state_by_hand():
    st = (((1, 1),), ((2, 1),))
    img, sign = mirror_state(4, st)
    assert img == (((3, 1),), ((4, 1),)) and sign == 1
    st2 = (((1, 1), (1, 3)), ((4, 1), (4, 1)))
    img2, sign2 = mirror_state(4, st2)
    assert img2 == (((1, 1), (1, 1)), ((4, 1), (4, 3)))
    # colour sum 1+1+4+4 = 10, two modes, n+1 = 5: 10 + 10 even
    assert sign2 == 1
    with pytest.raises(ValueError):
        mirror_state(4, (((1, 1),), ()))


def test_mirror_is_an_involution_with_stable_sign():
    for st in fock_states(4, 0, 4):
        img, sign = mirror_state(4, st)
        back, sign2 = mirror_state(4, img)
        assert back == st and sign2 == sign
        assert state_energy2(img) == state_energy2(st)
        assert fold_weight(4, state_weight(4, img)) == fold_weight(
            4, state_weight(4, st)
        )


def test_fold_and_sp_coordinates():
    assert fold_weight(4, (3, 1, 0, 2)) == (1, 1)
    assert sp_root_coords((2, 0)) == (2, 1)
    assert sp_root_coords((1, 1)) == (1, 1)
    assert sp_root_coords((0, -2)) == (0, -1)
    with pytest.raises(ValueError):
        sp_root_coords((1, 0))


def test_charge_zero_split_sums_to_the_sector():
    n, e2max = 4, 6
    plus, minus = charge_zero_split(n, e2max)
    full: dict[int, dict[tuple[int, ...], int]] = {}
    for st in fock_states(n, 0, e2max):
        e2 = state_energy2(st)
        v = fold_weight(n, state_weight(n, st))
        b = full.setdefault(e2, {})
        b[v] = b.get(v, 0) + 1
    recon: dict[int, dict[tuple[int, ...], int]] = {}
    for part in (plus, minus):
        for e2, b in part.items():
            tgt = recon.setdefault(e2, {})
            for v, c in b.items():
                tgt[v] = tgt.get(v, 0) + c
    assert recon == full


def test_split_difference_is_the_paired_product():
    # the graded trace of the flip has a two-mode-block product form
    n, e2max = 4, 8
    plus, minus = charge_zero_split(n, e2max)
    diff: dict[int, dict[tuple[int, ...], int]] = {}
    for e2 in set(plus) | set(minus):
        b = {}
        for v, c in plus.get(e2, {}).items():
            b[v] = c
        for v, c in minus.get(e2, {}).items():
            b[v] = b.get(v, 0) - c
        b = {v: c for v, c in b.items() if c}
        if b:
            diff[e2] = b
    assert diff == mirror_pair_slices(n // 2, e2max)


def test_split_to_char_frame():
    rs = root_system("C", 2)
    plus, _ = charge_zero_split(4, 6)
    ch = split_to_char(rs, plus, 3)
    assert ch.base.level == -1
    assert ch.coeff(0, (0, 0)) == 1
    assert ch.qmax == 3 and max(ch.slices) <= 3


# -- one oscillator family under the sign flip ------------------------------------


def test_oscillator_split_paths_agree():
    for qmax in (6, 12):
        assert oscillator_split(qmax) == oscillator_split_brute(qmax)


def test_oscillator_split_totals():
    qmax = 10
    plus, minus = oscillator_split(qmax)
    parts = qpoly_invert(phi_slices(qmax), qmax)
    tot = {m: plus.get(m, 0) + minus.get(m, 0) for m in range(qmax + 1)}
    assert tot == {m: parts.get(m, 0) for m in range(qmax + 1)}
    # the signed count is phi(q)/phi(q^2)
    ratio = qpoly_mul(
        phi_slices(qmax), qpoly_invert(phi_slices(qmax, 2), qmax), qmax
    )
    signed = {m: plus.get(m, 0) - minus.get(m, 0) for m in range(qmax + 1)}
    assert signed == {m: ratio.get(m, 0) for m in range(qmax + 1)}
