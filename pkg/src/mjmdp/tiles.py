"""Pure tile arithmetic: hands, winning detection, shanten, waits, exchanges.

Tile kinds are integers 0..33: 0-8 = 1m-9m, 9-17 = 1p-9p, 18-26 = 1s-9s,
27-33 = honors (east, south, west, north, white, green, red).  A hand is a
34-entry count vector.  Everything here is a pure function; the heavy parts
are vectorized over (N, kinds) count matrices so the solver can evaluate tens
of thousands of hands per call.

Reduced universes (fewer kinds, smaller hands) are supported so that search
and solver code can be validated exhaustively on tractable instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._tables import INF, combine, group_table

N_KINDS = 34
SUITS = "mpsz"
HONOR_NAMES = ("east", "south", "west", "north", "white", "green", "red")
ORPHANS = (0, 8, 9, 17, 18, 26, 27, 28, 29, 30, 31, 32, 33)
WINDS = (27, 28, 29, 30)
DRAGONS = (31, 32, 33)


class ContractError(ValueError):
    """An operation was called with arguments violating its precondition."""


@dataclass(frozen=True)
class Universe:
    """Shape of the tile set and of a complete hand.

    The default is the full game: three run-capable suits of nine ranks, seven
    honor kinds, four copies each, hands of 13 tiles completing into four sets
    plus a pair.  Reduced universes shrink any of these for exhaustive tests.
    """

    suits: tuple[int, ...] = (9, 9, 9)
    honors: int = 7
    copies: int = 4
    mentsu_target: int = 4
    special_hands: bool = True

    def __post_init__(self):
        if self.mentsu_target < 1 or self.mentsu_target > 4:
            raise ContractError("mentsu_target must be in 1..4")

    @property
    def hand_tiles(self) -> int:
        """Concealed tile count of a meldless waiting hand."""
        return 3 * self.mentsu_target + 1

    @property
    def n_kinds(self) -> int:
        return sum(self.suits) + self.honors

    @property
    def groups(self) -> tuple[tuple[int, int, bool], ...]:
        out = []
        start = 0
        for n in self.suits:
            out.append((start, n, True))
            start += n
        if self.honors:
            out.append((start, self.honors, False))
        return tuple(out)

    @property
    def is_full(self) -> bool:
        return self.suits == (9, 9, 9) and self.honors == 7 and self.copies == 4

    def tile_pool(self) -> np.ndarray:
        return np.full(self.n_kinds, self.copies, dtype=np.int16)


FULL = Universe()
#: single 9-rank suit, 4-tile hands (one set plus pair): the solver test bed
MINI = Universe(suits=(9,), honors=0, mentsu_target=1, special_hands=False)


# ---------------------------------------------------------------------------
# kind helpers (full universe indexing)

def kind_suit(kind: int) -> int:
    """Suit index 0..2 for suited kinds, 3 for honors."""
    return min(kind // 9, 3)


def kind_rank(kind: int) -> int:
    """Rank 1..9 within the suit; honor ordinal 1..7."""
    return kind - 27 + 1 if kind >= 27 else kind % 9 + 1


def is_honor(kind: int) -> bool:
    return kind >= 27


def is_terminal(kind: int) -> bool:
    return kind < 27 and kind % 9 in (0, 8)


def kind_name(kind: int) -> str:
    if not 0 <= kind < N_KINDS:
        raise ContractError(f"tile kind out of range: {kind}")
    return f"{kind_rank(kind)}{SUITS[kind_suit(kind)]}"


def parse_kind(text: str) -> int:
    text = text.strip()
    if len(text) != 2 or text[1] not in SUITS or not text[0].isdigit():
        raise ContractError(f"bad tile name: {text!r}")
    rank, suit = int(text[0]), SUITS.index(text[1])
    hi = 7 if suit == 3 else 9
    if not 1 <= rank <= hi:
        raise ContractError(f"bad tile name: {text!r}")
    return suit * 9 + rank - 1


def indicated_dora(indicator: int) -> int:
    """Dora kind pointed at by an indicator tile (next in its series)."""
    if indicator < 27:
        return indicator - indicator % 9 + (indicator % 9 + 1) % 9
    if indicator < 31:
        return 27 + (indicator - 27 + 1) % 4
    return 31 + (indicator - 31 + 1) % 3


# ---------------------------------------------------------------------------
# hand containers

class TileMultiset:
    """Concealed hand: 34 tile counts with a cached total.

    Mutable (add/remove are O(1)); use .key() when a dict key or set member
    is needed.
    """

    __slots__ = ("counts", "total")

    def __init__(self, counts=None):
        if counts is None:
            self.counts = [0] * N_KINDS
            self.total = 0
        else:
            counts = list(counts)
            if len(counts) != N_KINDS:
                raise ContractError("need 34 counts")
            if any(c < 0 or c > 4 for c in counts):
                raise ContractError("tile counts must be 0..4")
            self.counts = counts
            self.total = sum(counts)
            if self.total > 14:
                raise ContractError("hand holds more than 14 tiles")

    @classmethod
    def from_string(cls, text: str) -> "TileMultiset":
        return cls(parse_counts(text))

    @classmethod
    def from_kinds(cls, kinds) -> "TileMultiset":
        hand = cls()
        for k in kinds:
            hand.add(k)
        return hand

    def add(self, kind: int) -> None:
        if self.counts[kind] >= 4:
            raise ContractError(f"fifth copy of {kind_name(kind)}")
        self.counts[kind] += 1
        self.total += 1

    def remove(self, kind: int) -> None:
        if self.counts[kind] <= 0:
            raise ContractError(f"removing absent {kind_name(kind)}")
        self.counts[kind] -= 1
        self.total -= 1

    def copy(self) -> "TileMultiset":
        dup = TileMultiset.__new__(TileMultiset)
        dup.counts = list(self.counts)
        dup.total = self.total
        return dup

    def key(self) -> bytes:
        return bytes(self.counts)

    def kinds(self):
        return [k for k in range(N_KINDS) if self.counts[k] > 0]

    def to_array(self) -> np.ndarray:
        return np.array(self.counts, dtype=np.uint8)

    def __eq__(self, other):
        return isinstance(other, TileMultiset) and self.counts == other.counts

    def __contains__(self, kind: int) -> bool:
        return self.counts[kind] > 0

    def __len__(self) -> int:
        return self.total

    def __repr__(self):
        return f"TileMultiset({format_counts(self.counts)!r})"

    def __str__(self):
        return format_counts(self.counts)


@dataclass(frozen=True)
class Meld:
    """Revealed set: pon (triplet) or chi (run), with the feeding seat."""

    kind: str  # "pon" | "chi"
    tiles: tuple[int, int, int]
    source_seat: int = -1

    def __post_init__(self):
        t = tuple(sorted(self.tiles))
        object.__setattr__(self, "tiles", t)
        if self.kind == "pon":
            if not (t[0] == t[1] == t[2]):
                raise ContractError("pon needs three identical kinds")
        elif self.kind == "chi":
            same_suit = kind_suit(t[0]) == kind_suit(t[2]) and not is_honor(t[2])
            if not (same_suit and t[1] == t[0] + 1 and t[2] == t[0] + 2):
                raise ContractError("chi needs three consecutive suited ranks")
        else:
            raise ContractError(f"unknown meld kind {self.kind!r}")


def parse_counts(text: str) -> list[int]:
    """Parse hand notation like '123m55p777z' into 34 counts."""
    counts = [0] * N_KINDS
    digits: list[int] = []
    for ch in text.strip():
        if ch.isdigit():
            digits.append(int(ch))
        elif ch in SUITS:
            suit = SUITS.index(ch)
            hi = 7 if suit == 3 else 9
            for d in digits:
                if not 1 <= d <= hi:
                    raise ContractError(f"rank {d} invalid for suit {ch}")
                counts[suit * 9 + d - 1] += 1
            digits = []
        elif not ch.isspace():
            raise ContractError(f"bad character {ch!r} in hand notation")
    if digits:
        raise ContractError("trailing ranks without a suit letter")
    if any(c > 4 for c in counts):
        raise ContractError("more than four copies of a kind")
    return counts


def format_counts(counts) -> str:
    parts = []
    for suit in range(4):
        lo, hi = suit * 9, suit * 9 + (7 if suit == 3 else 9)
        run = "".join(str(k - lo + 1) * counts[k] for k in range(lo, hi) if counts[k])
        if run:
            parts.append(run + SUITS[suit])
    return "".join(parts)


# ---------------------------------------------------------------------------
# vectorized core

def _as_matrix(counts) -> np.ndarray:
    arr = np.asarray(counts, dtype=np.uint8)
    if arr.ndim == 1:
        arr = arr[None, :]
    return arr


def hand_distance_blocks(counts: np.ndarray, universe: Universe, target: int) -> np.ndarray:
    """Per-hand (N, target+1, 2) min-draw blocks over all groups combined."""
    parts = []
    for start, n, runs in universe.groups:
        gt = group_table(n, runs, universe.copies, 4)
        codes = gt.encode(counts[:, start : start + n])
        parts.append(gt.dist[codes][:, : target + 1, :].astype(np.int16))
    return combine(parts, target)


def _special_replacement(counts: np.ndarray, universe: Universe) -> np.ndarray | None:
    """Seven-pairs / thirteen-orphans replacement numbers, or None."""
    if not universe.special_hands:
        return None
    pairs = (counts >= 2).sum(axis=1).astype(np.int16)
    kinds = (counts >= 1).sum(axis=1).astype(np.int16)
    repl = 7 - pairs + np.maximum(0, 7 - kinds)
    if universe.is_full:
        orph = counts[:, ORPHANS]
        present = (orph >= 1).sum(axis=1).astype(np.int16)
        dup = (orph >= 2).any(axis=1)
        repl = np.minimum(repl, 14 - present - dup)
    return repl


def replacement_many(counts, melds: int = 0, universe: Universe = FULL) -> np.ndarray:
    """Minimum draws to complete each hand row (surplus tiles discardable)."""
    arr = _as_matrix(counts)
    target = universe.mentsu_target - melds
    if target < 0:
        raise ContractError("more melds than the mentsu target")
    repl = hand_distance_blocks(arr, universe, target)[:, target, 1]
    if melds == 0:
        special = _special_replacement(arr, universe)
        if special is not None:
            repl = np.minimum(repl, special)
    return repl


def shanten_many(counts, melds: int = 0, universe: Universe = FULL) -> np.ndarray:
    """Shanten numbers for (N, kinds) rows of 13-tile-equivalent hands."""
    return replacement_many(counts, melds, universe).astype(np.int16) - 1


def is_winning_many(counts, melds: int = 0, universe: Universe = FULL) -> np.ndarray:
    """Boolean rows: does each 14-tile-equivalent hand decompose completely."""
    return replacement_many(counts, melds, universe) == 0


def adjacent_replacements(counts, melds: int = 0, universe: Universe = FULL,
                          delta: int = 1) -> np.ndarray:
    """Replacement numbers of every one-tile modification of each hand row.

    Returns (N, kinds) int16: the minimum completion draws of ``hand + e_k``
    (delta=+1) or ``hand - e_k`` (delta=-1).  Entries where the modification
    is impossible (count at the copies cap, or zero) are INF.  This is the
    workhorse behind waits and the search-space pruning.
    """
    if delta not in (1, -1):
        raise ContractError("delta must be +1 or -1")
    arr = _as_matrix(counts)
    n = arr.shape[0]
    target = universe.mentsu_target - melds
    parts = []
    codes = []
    tables = []
    for start, g, runs in universe.groups:
        gt = group_table(g, runs, universe.copies, 4)
        c = gt.encode(arr[:, start : start + g])
        codes.append(c)
        tables.append(gt)
        parts.append(gt.dist[c][:, : target + 1, :].astype(np.int16))
    ngroups = len(parts)
    ident = np.full((n, target + 1, 2), INF, dtype=np.int16)
    ident[:, 0, 0] = 0
    others = []
    for g in range(ngroups):
        rest = [parts[j] for j in range(ngroups) if j != g] or [ident]
        others.append(combine(rest, target))

    out = np.full((n, universe.n_kinds), INF, dtype=np.int16)
    specials = melds == 0 and universe.special_hands
    if specials:
        pairs0 = (arr >= 2).sum(axis=1).astype(np.int16)
        kinds0 = (arr >= 1).sum(axis=1).astype(np.int16)
        if universe.is_full:
            orph = arr[:, ORPHANS]
            present0 = (orph >= 1).sum(axis=1).astype(np.int16)
            dup0 = (orph >= 2).sum(axis=1).astype(np.int16)
    for gi, (start, g, runs) in enumerate(universe.groups):
        gt = tables[gi]
        other = others[gi]
        for j in range(g):
            kind = start + j
            c_k = arr[:, kind].astype(np.int16)
            ok = c_k < universe.copies if delta == 1 else c_k > 0
            if not ok.any():
                continue
            step = gt.base**j * delta
            mod = gt.dist[codes[gi] + step * ok][:, : target + 1, :]
            best = np.full(n, INF, dtype=np.int16)
            for ha in range(target + 1):
                for pa in range(2):
                    cand = other[:, ha, pa] + mod[:, target - ha, 1 - pa]
                    np.minimum(best, cand, out=best)
            if specials:
                if delta == 1:
                    pairs = pairs0 + (c_k == 1)
                    kinds = kinds0 + (c_k == 0)
                else:
                    pairs = pairs0 - (c_k == 2)
                    kinds = kinds0 - (c_k == 1)
                sp = 7 - pairs + np.maximum(0, 7 - kinds)
                np.minimum(best, sp.astype(np.int16), out=best)
                if universe.is_full and kind in ORPHANS:
                    if delta == 1:
                        present = present0 + (c_k == 0)
                        dup = dup0 + (c_k == 1)
                    else:
                        present = present0 - (c_k == 1)
                        dup = dup0 - (c_k == 2)
                    np.minimum(best, (14 - present - np.minimum(dup, 1)).astype(np.int16), out=best)
                elif universe.is_full:
                    np.minimum(best, (14 - present0 - np.minimum(dup0, 1)).astype(np.int16), out=best)
            out[:, kind] = np.where(ok, best, INF)
    return out


def waits_many(counts, melds: int = 0, universe: Universe = FULL) -> np.ndarray:
    """(N, kinds) booleans: completing kinds of 13-tile-equivalent rows.

    A kind is a wait when adding one copy (cap permitting) yields a winning
    hand.  Melds held outside the counts reduce the set target.
    """
    return adjacent_replacements(counts, melds, universe, delta=1) == 0


# ---------------------------------------------------------------------------
# scalar API (spec surface, full universe)

@lru_cache(maxsize=1 << 18)
def _shanten_key(key: bytes, melds: int, universe: Universe) -> int:
    arr = np.frombuffer(key, dtype=np.uint8)[None, :]
    return int(replacement_many(arr, melds, universe)[0]) - 1


def shanten_number(hand: TileMultiset, melds=()) -> int:
    """Minimum exchanges to tenpai; -1 for a complete 14-tile hand."""
    m = len(melds)
    if hand.total + 3 * m not in (13, 14):
        raise ContractError(f"shanten needs a 13/14-tile hand, got {hand.total}+{3 * m}")
    return _shanten_key(hand.key(), m, FULL)


def is_winning_hand(hand: TileMultiset, melds=()) -> bool:
    """True iff the 14-tile-equivalent hand decomposes into sets and a pair."""
    m = len(melds)
    if hand.total + 3 * m != 14:
        raise ContractError(f"win check needs 14 tiles, got {hand.total}+{3 * m}")
    return _shanten_key(hand.key(), m, FULL) == -1


def winning_tiles(hand: TileMultiset, melds=()) -> set[int]:
    """Kinds completing a 13-tile-equivalent hand (respecting the 4-copy cap)."""
    m = len(melds)
    if hand.total + 3 * m != 13:
        raise ContractError(f"waits need 13 tiles, got {hand.total}+{3 * m}")
    used = list(hand.counts)
    for meld in melds:
        for t in meld.tiles:
            used[t] += 1
    row = waits_many(hand.to_array(), m, FULL)[0]
    return {k for k in range(N_KINDS) if row[k] and used[k] < 4}


def exchange_neighbors(hand: TileMultiset) -> list[TileMultiset]:
    """All hands one tile exchange away (remove one kind, add another)."""
    if hand.total % 3 != 1 or not 0 < hand.total <= 13:
        raise ContractError("exchange needs a 13-tile-equivalent hand")
    out = []
    for x in range(N_KINDS):
        if hand.counts[x] == 0:
            continue
        for y in range(N_KINDS):
            if y == x or hand.counts[y] >= 4:
                continue
            nb = hand.copy()
            nb.counts[x] -= 1
            nb.counts[y] += 1
            out.append(nb)
    return out


def shanten_of_counts(counts, melds: int = 0, universe: Universe = FULL) -> int:
    """Scalar shanten for a raw count sequence (cached)."""
    return _shanten_key(bytes(bytearray(counts)), melds, universe)
