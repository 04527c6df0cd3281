"""Matrix-free application of the shift-averaging recurrence operator.

The operator maps d dense argument vectors, indexed by encoded tuple states,
to one output vector.  At coordinate A it takes, over every branch character
z whose mismatch set is nonempty, the average of argument vector number
``|N_z(A)|`` over all ways of shifting the mismatching strings and appending
a free character, keeps the best branch, and adds 1 wherever all d strings
share a head.  Branches with an empty mismatch set are excluded from the
maximum (for sigma >= 2 every coordinate keeps at least one branch), which
makes the operator exactly translation invariant as well as monotone.

Nothing here materializes the sigma**(l*d) x sigma**(l*d) branch matrices.
Instead, for each branch character z and shift count i, a cached index map
records the coordinates with exactly i mismatching heads together with the
sigma**i source coordinates each one averages over.  Applying the operator
is then a handful of fancy-indexed gathers and row sums per (z, i) pair,
which keeps million-coordinate sweeps in vectorized numpy.
"""

from __future__ import annotations

from collections.abc import Sequence
from math import comb

import numpy as np


def fz_nonzero_count(sigma: int, d: int, l: int, z: int, i: int) -> int:
    """Closed-form nonzero count of the shift-count-i piece of branch z.

    The branch piece, viewed as a 0-1 matrix, has one entry per
    (coordinate, completion) incidence; the count does not depend on z.
    """
    if not 0 <= z < sigma:
        raise ValueError(f"branch character {z} out of range [0, {sigma})")
    if not 1 <= i <= d:
        raise ValueError(f"shift count {i} out of range [1, {d}]")
    return comb(d, i) * sigma ** ((l - 1) * d) * (sigma - 1) ** i * sigma**i


class OperatorContext:
    """Immutable (sigma, d, l) configuration with cached branch index maps.

    ``maps[z][i]`` is a pair ``(targets, sources)``: ``targets`` holds the
    encoded coordinates whose number of heads differing from z is exactly i,
    and ``sources[k]`` the sigma**i encoded states reachable from
    ``targets[k]`` by shifting those i strings and appending every possible
    character.  Ordering of completions within a row is irrelevant (they are
    summed); target rows are in increasing coordinate order.
    """

    def __init__(self, sigma: int, d: int, l: int) -> None:
        if sigma < 2:
            raise ValueError(f"sigma must be >= 2, got {sigma}")
        if d < 2:
            raise ValueError(f"d must be >= 2, got {d}")
        if l < 1:
            raise ValueError(f"l must be >= 1, got {l}")
        self.sigma = sigma
        self.d = d
        self.l = l
        self.n = sigma ** (l * d)
        self._inv_pow = [1.0] + [1.0 / sigma**i for i in range(1, d + 1)]
        self._b_vector: np.ndarray | None = None
        self._build_maps()

    # -- construction -----------------------------------------------------

    def _build_maps(self) -> None:
        sigma, d, l, n = self.sigma, self.d, self.l, self.n
        idx_dtype = np.int32 if n <= np.iinfo(np.int32).max else np.int64
        k = np.arange(n, dtype=np.int64)
        block = sigma**l
        head_place = sigma ** (l - 1)
        # place[j]: weight of string j's block in the encoded index
        place = np.array([sigma ** (l * (d - 1 - j)) for j in range(d)], dtype=np.int64)
        heads = np.empty((n, d), dtype=np.int8)
        # shift[j]: add to an index to replace string j by tail(string j) + 0
        shift = []
        for j in range(d):
            code_j = (k // place[j]) % block
            heads[:, j] = code_j // head_place
            shift.append(((code_j % head_place) * sigma - code_j) * place[j])
        del code_j

        self.b_indices = np.flatnonzero(
            np.all(heads == heads[:, :1], axis=1)
        ).astype(idx_dtype)

        maps: list[dict[int, tuple[np.ndarray, np.ndarray]]] = []
        for z in range(sigma):
            mask = heads != z
            count = mask.sum(axis=1, dtype=np.int8)
            base = k.copy()
            for j in range(d):
                base += np.where(mask[:, j], shift[j], 0)
            per_count: dict[int, tuple[np.ndarray, np.ndarray]] = {}
            for i in range(1, d + 1):
                rows = np.flatnonzero(count == i)
                # columns of the i mismatching strings, in increasing order
                pos = np.argsort(~mask[rows], axis=1, kind="stable")[:, :i]
                pvals = place[pos]
                completions = sigma**i
                assign = np.arange(completions, dtype=np.int64)
                offs = np.zeros((rows.size, completions), dtype=np.int64)
                for slot in range(i):
                    digit = (assign // sigma**slot) % sigma
                    offs += pvals[:, slot : slot + 1] * digit[np.newaxis, :]
                sources = (base[rows, np.newaxis] + offs).astype(idx_dtype)
                per_count[i] = (rows.astype(idx_dtype), sources)
            maps.append(per_count)
        self._maps = maps

    # -- application ------------------------------------------------------

    def _check_args(self, args: Sequence[np.ndarray]) -> list[np.ndarray]:
        if len(args) != self.d:
            raise ValueError(f"expected {self.d} argument vectors, got {len(args)}")
        checked = []
        for v in args:
            arr = np.asarray(v, dtype=np.float64)
            if arr.shape != (self.n,):
                raise ValueError(
                    f"argument vector has shape {arr.shape}, expected ({self.n},)"
                )
            checked.append(arr)
        return checked

    def apply_f(
        self,
        args: Sequence[np.ndarray],
        arg_offsets: Sequence[float] | None = None,
    ) -> np.ndarray:
        """Equal-heads bonus plus the best branch average.

        ``args[j-1]`` is the vector paired with branches that shift j strings
        (the "j characters consumed" slot).  ``arg_offsets``, when given, adds
        a scalar to slot j without materializing ``args[j-1] + offset``; used
        by the feasibility probe and by certificate verification so both run
        the identical arithmetic.
        """
        args = self._check_args(args)
        out = np.full(self.n, -np.inf)
        for z in range(self.sigma):
            for i, (targets, sources) in self._maps[z].items():
                vals = args[i - 1].take(sources).sum(axis=1)
                vals *= self._inv_pow[i]
                if arg_offsets is not None:
                    vals += arg_offsets[i - 1]
                cur = out[targets]
                np.maximum(cur, vals, out=cur)
                out[targets] = cur
        out[self.b_indices] += 1.0
        return out

    def apply_fz(
        self,
        z: int,
        args: Sequence[np.ndarray],
        arg_offsets: Sequence[float] | None = None,
    ) -> np.ndarray:
        """Single-branch averages; zero wherever branch z shifts nothing."""
        if not 0 <= z < self.sigma:
            raise ValueError(f"branch character {z} out of range [0, {self.sigma})")
        args = self._check_args(args)
        out = np.zeros(self.n)
        for i, (targets, sources) in self._maps[z].items():
            vals = args[i - 1].take(sources).sum(axis=1)
            vals *= self._inv_pow[i]
            if arg_offsets is not None:
                vals += arg_offsets[i - 1]
            out[targets] = vals
        return out

    def apply_fzi(self, z: int, i: int, v: np.ndarray) -> np.ndarray:
        """Unscaled shift-count-i piece of branch z: plain completion sums.

        The branch average decomposes as sum over i of sigma**-i times these
        pieces; exposed for structure checks.
        """
        if not 0 <= z < self.sigma:
            raise ValueError(f"branch character {z} out of range [0, {self.sigma})")
        if not 1 <= i <= self.d:
            raise ValueError(f"shift count {i} out of range [1, {self.d}]")
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.n,):
            raise ValueError(f"vector has shape {v.shape}, expected ({self.n},)")
        targets, sources = self._maps[z][i]
        out = np.zeros(self.n)
        out[targets] = v.take(sources).sum(axis=1)
        return out

    # -- structure --------------------------------------------------------

    def incidence_count(self, z: int, i: int) -> int:
        """(coordinate, source) incidences the sweep performs for (z, i)."""
        if not 0 <= z < self.sigma:
            raise ValueError(f"branch character {z} out of range [0, {self.sigma})")
        if not 1 <= i <= self.d:
            raise ValueError(f"shift count {i} out of range [1, {self.d}]")
        _, sources = self._maps[z][i]
        return int(sources.size)

    @property
    def b(self) -> np.ndarray:
        """0/1 vector marking coordinates whose strings all share a head."""
        if self._b_vector is None:
            vec = np.zeros(self.n)
            vec[self.b_indices] = 1.0
            self._b_vector = vec
        return self._b_vector
