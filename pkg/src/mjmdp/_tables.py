"""Per-group tile-completion distance tables.

For every possible count vector of one tile group (a run-capable suit, or the
honor block where only triplets exist) the table stores the minimum number of
tiles that must be drawn into the group so that it contains ``h`` complete
sets plus ``p`` pairs, for every ``h <= max_sets`` and ``p in {0, 1}``.
Surplus tiles are free to discard, so the value is simply the distance of the
count vector from the nearest superset of a valid target shape.

Group tables are combined per hand with a min-plus convolution, which yields
the hand's replacement number (draws needed to complete it); shanten numbers,
win detection and waits all derive from that.

Building the 9-kind table touches all 5**9 count vectors, so the result is
cached on disk (``~/.cache/mjmdp`` unless MJMDP_TABLE_CACHE points elsewhere).
"""

from __future__ import annotations

import os

import numpy as np

INF = 127  # distances never exceed 3 * max_sets + 2 = 14

_MEMO: dict[tuple, "GroupTable"] = {}


def _cache_dir() -> str:
    return os.environ.get(
        "MJMDP_TABLE_CACHE", os.path.join(os.path.expanduser("~"), ".cache", "mjmdp")
    )


class GroupTable:
    """Distance table for one tile group.

    dist has shape (base**n_kinds, max_sets + 1, 2) and dtype int8; entry
    [code, h, p] is the number of draws needed before the group can supply
    h sets and p pairs.  code is the base-(copies+1) encoding of the counts.
    """

    def __init__(self, n_kinds: int, runs: bool, copies: int = 4, max_sets: int = 4):
        self.n_kinds = n_kinds
        self.runs = runs
        self.copies = copies
        self.max_sets = max_sets
        self.base = copies + 1
        self.pow = (self.base ** np.arange(n_kinds)).astype(np.int64)
        self.dist = _load_or_build(n_kinds, runs, copies, max_sets)

    def encode(self, counts: np.ndarray) -> np.ndarray:
        """Encode count rows (..., n_kinds) into table codes."""
        return counts.astype(np.int64) @ self.pow

    def lookup(self, codes: np.ndarray) -> np.ndarray:
        """Gather (len(codes), max_sets + 1, 2) distance blocks."""
        return self.dist[codes]


def group_table(n_kinds: int, runs: bool, copies: int = 4, max_sets: int = 4) -> GroupTable:
    key = (n_kinds, runs, copies, max_sets)
    table = _MEMO.get(key)
    if table is None:
        table = GroupTable(*key)
        _MEMO[key] = table
    return table


def _load_or_build(n_kinds: int, runs: bool, copies: int, max_sets: int) -> np.ndarray:
    big = (copies + 1) ** n_kinds > 200_000
    tag = f"tables-v1-k{n_kinds}{'r' if runs else 't'}c{copies}s{max_sets}.npz"
    path = os.path.join(_cache_dir(), tag)
    if big and os.path.exists(path):
        try:
            with np.load(path) as blob:
                return blob["dist"]
        except Exception:
            pass  # corrupt cache: rebuild
    dist = _build(n_kinds, runs, copies, max_sets)
    if big:
        try:
            os.makedirs(_cache_dir(), exist_ok=True)
            np.savez_compressed(path + ".tmp.npz", dist=dist)
            os.replace(path + ".tmp.npz", path)
        except OSError:
            pass  # read-only cache dir: keep in memory only
    return dist


def _build(n_kinds: int, runs: bool, copies: int, max_sets: int) -> np.ndarray:
    base = copies + 1
    size = base**n_kinds
    idx = np.arange(size, dtype=np.int64)
    digits = np.empty((n_kinds, size), dtype=np.uint8)
    for k in range(n_kinds):
        digits[k] = (idx // base**k) % base
    del idx

    # (offset, removable-mask) per set shape
    set_shapes: list[tuple[int, np.ndarray]] = [
        (3 * base**k, digits[k] >= 3) for k in range(n_kinds)
    ]
    if runs:
        for k in range(n_kinds - 2):
            off = base**k + base ** (k + 1) + base ** (k + 2)
            ok = (digits[k] >= 1) & (digits[k + 1] >= 1) & (digits[k + 2] >= 1)
            set_shapes.append((off, ok))

    # contains[h][code]: the vector holds h sets (no pair yet)
    contains = [np.ones(size, dtype=bool)]
    for h in range(1, max_sets + 1):
        cur = np.zeros(size, dtype=bool)
        prev = contains[h - 1]
        for off, ok in set_shapes:
            cur[off:] |= prev[: size - off] & ok[off:]
        contains.append(cur)

    def with_pair(holds: np.ndarray) -> np.ndarray:
        out = np.zeros(size, dtype=bool)
        for k in range(n_kinds):
            off = 2 * base**k
            out[off:] |= holds[: size - off] & (digits[k] >= 2)[off:]
        return out

    # One backward pass in descending count-total order resolves every
    # distance exactly: adding a tile always increases the total by one.
    dsum = digits.sum(axis=0, dtype=np.int16)
    max_sum = n_kinds * copies
    order = np.argsort(dsum, kind="stable")
    bounds = np.searchsorted(dsum[order], np.arange(max_sum + 2))
    levels = [order[bounds[s] : bounds[s + 1]] for s in range(max_sum + 1)]

    dist = np.empty((size, max_sets + 1, 2), dtype=np.int8)
    addable = [(base**k, digits[k] < copies) for k in range(n_kinds)]
    for h in range(max_sets + 1):
        for p in range(2):
            seed = contains[h] if p == 0 else with_pair(contains[h])
            d = np.where(seed, np.int16(0), np.int16(INF))
            top = size - 1
            for s in range(max_sum - 1, -1, -1):
                ii = levels[s]
                cur = d[ii]
                for off, ok in addable:
                    # clip: out-of-range gathers are masked off anyway
                    cand = d[np.minimum(ii + off, top)] + np.int16(1)
                    np.minimum(cur, np.where(ok[ii], cand, np.int16(INF)), out=cur)
                d[ii] = cur
            dist[:, h, p] = np.minimum(d, INF).astype(np.int8)
    return dist


def combine(parts: list[np.ndarray], max_sets: int) -> np.ndarray:
    """Min-plus convolution of per-group distance blocks.

    parts: list of (N, max_sets + 1, 2) arrays. Returns the same shape for the
    whole hand: minimum draws to assemble h sets and p pairs across groups.
    """
    acc = parts[0].astype(np.int16)
    for part in parts[1:]:
        nxt = np.full(acc.shape, INF, dtype=np.int16)
        for h in range(max_sets + 1):
            for p in range(2):
                best = None
                for ha in range(h + 1):
                    for pa in range(p + 1):
                        cand = acc[:, ha, pa] + part[:, h - ha, p - pa]
                        best = cand if best is None else np.minimum(best, cand)
                nxt[:, h, p] = best
        acc = nxt
    return acc
