import random

import numpy as np
import pytest

from mjmdp import tiles
from mjmdp.tiles import FULL, Meld, TileMultiset, Universe

from oracles import all_hands, bfs_shanten_map, naive_is_winning, naive_replacement

REDUCED = Universe(suits=(5,), honors=0, mentsu_target=4, special_hands=True)


def random_hand(rng, total=13, universe=FULL):
    pool = [k for k in range(universe.n_kinds) for _ in range(universe.copies)]
    picked = rng.sample(pool, total)
    c = [0] * tiles.N_KINDS
    for k in picked:
        c[k] += 1
    return c


def biased_hand(rng, total=13):
    """Hands near completion: built from set/pair fragments then trimmed."""
    c = [0] * 34
    placed = 0
    while placed < total:
        r = rng.random()
        if r < 0.4:
            k = rng.randrange(34)
            if c[k] <= 1:
                c[k] += 3 if placed + 3 <= total else total - placed
                placed = sum(c)
        elif r < 0.8:
            s, i = rng.randrange(3), rng.randrange(7)
            k = s * 9 + i
            if max(c[k], c[k + 1], c[k + 2]) < 4 and placed + 3 <= total:
                c[k] += 1
                c[k + 1] += 1
                c[k + 2] += 1
                placed += 3
            elif placed + 3 > total:
                k = rng.randrange(34)
                if c[k] < 4:
                    c[k] += 1
                    placed += 1
        else:
            k = rng.randrange(34)
            if c[k] <= 2 and placed + 2 <= total:
                c[k] += 2
                placed += 2
    return c


# ---------------------------------------------------------------------------
# notation and containers

def test_notation_round_trip():
    text = "123m55p777z"
    hand = TileMultiset.from_string(text)
    assert str(hand) == text
    assert hand.total == 8


def test_notation_rejects_garbage():
    with pytest.raises(tiles.ContractError):
        TileMultiset.from_string("123x")
    with pytest.raises(tiles.ContractError):
        TileMultiset.from_string("89z")
    with pytest.raises(tiles.ContractError):
        TileMultiset.from_string("11111m")


def test_multiset_mutation_and_caps():
    hand = TileMultiset.from_string("1111m")
    with pytest.raises(tiles.ContractError):
        hand.add(0)
    hand.add(1)
    assert hand.total == 5
    hand.remove(1)
    with pytest.raises(tiles.ContractError):
        hand.remove(1)


def test_meld_validation():
    Meld("pon", (5, 5, 5))
    Meld("chi", (3, 4, 5))
    with pytest.raises(tiles.ContractError):
        Meld("pon", (5, 5, 6))
    with pytest.raises(tiles.ContractError):
        Meld("chi", (7, 8, 9))  # crosses suit boundary
    with pytest.raises(tiles.ContractError):
        Meld("chi", (27, 28, 29))  # honors have no runs


def test_kind_decoding_bijective():
    for k in range(34):
        assert tiles.parse_kind(tiles.kind_name(k)) == k


def test_indicated_dora_cycles():
    assert tiles.indicated_dora(tiles.parse_kind("9m")) == tiles.parse_kind("1m")
    assert tiles.indicated_dora(tiles.parse_kind("4z")) == tiles.parse_kind("1z")
    assert tiles.indicated_dora(tiles.parse_kind("7z")) == tiles.parse_kind("5z")
    assert tiles.indicated_dora(tiles.parse_kind("5m")) == tiles.parse_kind("6m")


# ---------------------------------------------------------------------------
# is_winning_hand

def test_four_triplets_plus_pair_wins():
    hand = TileMultiset.from_string("111222333444m55m")
    assert tiles.is_winning_hand(hand, [])


def test_thirteen_orphans_vs_arbitrary_distinct():
    orphans = TileMultiset.from_string("19m19p19s1234567z")
    orphans.add(tiles.parse_kind("1m"))
    assert tiles.is_winning_hand(orphans, [])
    distinct = TileMultiset.from_kinds(list(range(13)) + [20])
    assert not tiles.is_winning_hand(distinct, [])


def test_win_requires_fourteen_tiles():
    with pytest.raises(tiles.ContractError):
        tiles.is_winning_hand(TileMultiset.from_string("123m"), [])


def test_win_with_melds_reduces_target():
    hand = TileMultiset.from_string("123m44m")
    melds = [Meld("pon", (9, 9, 9)), Meld("pon", (10, 10, 10)), Meld("chi", (18, 19, 20))]
    assert tiles.is_winning_hand(hand, melds)


def test_winning_count_on_reduced_universe():
    hands = all_hands(REDUCED, 14)
    got = tiles.is_winning_many(
        np.array([h + (0,) * 29 for h in hands], dtype=np.uint8), 0, REDUCED
    )
    n_win = 0
    for i, h in enumerate(hands):
        exp = naive_is_winning(list(h) + [0] * 29, REDUCED)
        assert bool(got[i]) == exp, h
        n_win += exp
    assert n_win == got.sum() and n_win > 0


# ---------------------------------------------------------------------------
# shanten

def test_winning_hand_is_minus_one():
    hand = TileMultiset.from_string("123456789m11122z")
    assert tiles.shanten_number(hand, []) == -1


def test_delete_one_from_winning_gives_tenpai():
    rng = random.Random(11)
    for _ in range(50):
        c = biased_hand(rng, 14)
        if not bool(tiles.is_winning_many(np.array(c, dtype=np.uint8))[0]):
            continue
        kinds = [k for k in range(34) if c[k] > 0]
        k = rng.choice(kinds)
        c[k] -= 1
        hand = TileMultiset(c)
        assert tiles.shanten_number(hand, []) == 0


def test_shanten_matches_bfs_oracle_reduced():
    uni = Universe(suits=(5,), honors=0, mentsu_target=1, special_hands=False)
    dist = bfs_shanten_map(uni)
    hands = sorted(dist)
    arr = np.array([h + (0,) * 29 for h in hands], dtype=np.uint8)
    got = tiles.shanten_many(arr, 0, uni)
    for i, h in enumerate(hands):
        assert got[i] == dist[h], (h, got[i], dist[h])


def test_shanten_full_universe_spot_checks():
    rng = random.Random(5)
    checked = 0
    for _ in range(400):
        c = biased_hand(rng, 13)
        sh = tiles.shanten_number(TileMultiset(c), [])
        if sh <= 2:
            assert naive_replacement(c) == sh + 1, tiles.format_counts(c)
            checked += 1
        if checked >= 25:
            break
    assert checked >= 10


def test_shanten_lipschitz_under_exchange():
    rng = random.Random(3)
    for _ in range(40):
        c = biased_hand(rng, 13)
        hand = TileMultiset(c)
        s0 = tiles.shanten_number(hand, [])
        for nb in rng.sample(tiles.exchange_neighbors(hand), 10):
            assert abs(tiles.shanten_number(nb, []) - s0) <= 1


# ---------------------------------------------------------------------------
# winning_tiles

def test_non_tenpai_has_no_waits():
    hand = TileMultiset.from_string("159m159p159s1234z")
    assert tiles.shanten_number(hand, []) > 0
    assert tiles.winning_tiles(hand, []) == set()


def test_shanpon_waits():
    # honors cannot form runs, so the waits are exactly the two pair kinds
    hand = TileMultiset.from_string("111222333z44z55z")
    waits = tiles.winning_tiles(hand, [])
    assert waits == {tiles.parse_kind("4z"), tiles.parse_kind("5z")}
    # the suited analogue wins on both pairs too, plus run-based extras
    suited = TileMultiset.from_string("111m222m333m44m55m")
    suited_waits = tiles.winning_tiles(suited, [])
    assert {tiles.parse_kind("4m"), tiles.parse_kind("5m")} <= suited_waits
    assert suited_waits == {tiles.parse_kind(t) for t in ("1m", "2m", "3m", "4m", "5m", "6m")}


def test_waits_match_brute_force():
    rng = random.Random(23)
    checked = 0
    while checked < 40:
        c = biased_hand(rng, 13)
        hand = TileMultiset(c)
        if tiles.shanten_number(hand, []) != 0:
            continue
        checked += 1
        got = tiles.winning_tiles(hand, [])
        expect = set()
        for k in range(34):
            if c[k] >= 4:
                continue
            plus = list(c)
            plus[k] += 1
            if naive_is_winning(plus):
                expect.add(k)
        assert got == expect, tiles.format_counts(c)


def test_waits_respect_meld_tiles_for_cap():
    # four melds leave a single tile waiting to pair up (tanki)
    hand = TileMultiset.from_string("1m")
    melds = [
        Meld("pon", (1, 1, 1)),
        Meld("chi", (2, 3, 4)),
        Meld("chi", (11, 12, 13)),
        Meld("pon", (8, 8, 8)),
    ]
    assert tiles.winning_tiles(hand, melds) == {0}
    # own pon of 1m exhausts the fourth copy: no completing tile exists
    melds2 = melds[1:] + [Meld("pon", (0, 0, 0))]
    assert tiles.winning_tiles(TileMultiset.from_string("1m"), melds2) == set()


def test_win_iff_in_winning_tiles():
    rng = random.Random(9)
    for _ in range(30):
        c = biased_hand(rng, 13)
        hand = TileMultiset(c)
        waits = tiles.winning_tiles(hand, [])
        for k in range(34):
            if c[k] >= 4:
                continue
            plus = hand.copy()
            plus.add(k)
            assert tiles.is_winning_hand(plus, []) == (k in waits)


# ---------------------------------------------------------------------------
# exchange_neighbors

def test_neighbor_count_single_suit():
    hand = TileMultiset.from_string("1112223334445m")
    nbs = tiles.exchange_neighbors(hand)
    removable = [k for k in range(34) if hand.counts[k] > 0]
    expected = 0
    for x in removable:
        for y in range(34):
            if y != x and hand.counts[y] < 4:
                expected += 1
    assert len(nbs) == expected
    assert len({nb.key() for nb in nbs}) == len(nbs)


def test_neighbor_symmetry():
    rng = random.Random(1)
    c = random_hand(rng)
    hand = TileMultiset(c)
    for nb in rng.sample(tiles.exchange_neighbors(hand), 8):
        back = {x.key() for x in tiles.exchange_neighbors(nb)}
        assert hand.key() in back


def test_neighbors_exclude_saturated_kinds():
    hand = TileMultiset.from_string("1111222233334m")
    for nb in tiles.exchange_neighbors(hand):
        assert max(nb.counts) <= 4
        assert nb.counts[0] <= 4 and nb.counts[1] <= 4
