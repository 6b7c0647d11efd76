"""Text realization: pairwise next-sentence probabilities over the
position-sorted candidates, then a fluency search for the best fixed-length
sentence path.

Path scores are sums of log probabilities, which is monotone-equivalent to
the product and numerically stable.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Sentence
from .selection import CandidateSet

log = logging.getLogger(__name__)


class NspMatrix:
    """Upper-triangular matrix of next-sentence probabilities; entries are
    defined for m < n only and must lie in (0, 1)."""

    def __init__(self, size: int):
        if size < 1:
            raise ValueError("size must be positive")
        self.size = size
        self._probs = np.zeros((size, size), dtype=np.float64)

    def set(self, m: int, n: int, p: float) -> None:
        if not 0 <= m < n < self.size:
            raise IndexError(f"entry ({m},{n}) outside upper triangle")
        if not 0.0 < p < 1.0:
            raise ValueError(f"probability {p} outside (0, 1)")
        self._probs[m, n] = p

    def get(self, m: int, n: int) -> float:
        if not 0 <= m < n < self.size:
            raise IndexError(f"entry ({m},{n}) outside upper triangle")
        return float(self._probs[m, n])

    @classmethod
    def from_dense(cls, probs) -> "NspMatrix":
        arr = np.asarray(probs, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("probs must be square")
        mat = cls(arr.shape[0])
        for m in range(arr.shape[0]):
            for n in range(m + 1, arr.shape[0]):
                mat.set(m, n, float(arr[m, n]))
        return mat

    def dump_csv(self, path: str | Path) -> None:
        with Path(path).open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["m", "n", "prob"])
            for m in range(self.size):
                for n in range(m + 1, self.size):
                    writer.writerow([m, n, f"{self.get(m, n):.6f}"])


@dataclass(frozen=True)
class SummaryPath:
    indices: tuple[int, ...]  # strictly increasing candidate positions
    score: float              # sum of log P over consecutive pairs

    @property
    def start(self) -> int:
        return self.indices[0]


def _path_score(matrix: NspMatrix, indices: tuple[int, ...]) -> float:
    return sum(
        math.log(matrix.get(a, b)) for a, b in zip(indices, indices[1:])
    )


def build_matrix(candidates: CandidateSet, nsp_backend) -> NspMatrix:
    """Evaluate all size*(size-1)/2 ordered pairs through the NSP backend."""
    texts = candidates.texts
    size = len(texts)
    matrix = NspMatrix(size)
    pairs = [(texts[m], texts[n]) for m in range(size) for n in range(m + 1, size)]
    if not pairs:
        return matrix
    probs = nsp_backend.nsp(pairs)
    if len(probs) != len(pairs):
        raise ValueError(f"backend returned {len(probs)} probs for {len(pairs)} pairs")
    it = iter(probs)
    for m in range(size):
        for n in range(m + 1, size):
            matrix.set(m, n, next(it))
    return matrix


def greedy_search(matrix: NspMatrix, window: int = 3, target_len: int = 10) -> SummaryPath:
    """Grow a path from candidate 0, at each step taking the most probable
    successor among the next `window` candidates (ties to the smallest index)."""
    if window < 1 or target_len < 1:
        raise ValueError("window and target_len must be positive")
    path = [0]
    while len(path) < target_len:
        current = path[-1]
        hi = min(current + window, matrix.size - 1)
        successors = range(current + 1, hi + 1)
        if not successors:
            log.warning("greedy search exhausted candidates at length %d", len(path))
            break
        best = max(successors, key=lambda j: (matrix.get(current, j), -j))
        path.append(best)
    indices = tuple(path)
    return SummaryPath(indices=indices, score=_path_score(matrix, indices))


def _beam_from_start(
    matrix: NspMatrix,
    start: int,
    beam_width: int,
    target_len: int,
) -> SummaryPath:
    beam: list[tuple[float, tuple[int, ...]]] = [(0.0, (start,))]
    completed: list[tuple[float, tuple[int, ...]]] = []
    while beam:
        extensions: list[tuple[float, tuple[int, ...]]] = []
        for score, path in beam:
            last = path[-1]
            if len(path) >= target_len or last == matrix.size - 1:
                completed.append((score, path))
                continue
            for j in range(last + 1, matrix.size):
                extensions.append(
                    (score + math.log(matrix.get(last, j)), path + (j,))
                )
        extensions.sort(key=lambda t: (-t[0], t[1]))
        beam = extensions[:beam_width]
    # longer paths first (full-length when one exists), then raw score
    score, indices = min(completed, key=lambda t: (-len(t[1]), -t[0], t[1]))
    return SummaryPath(indices=indices, score=score)


def beam_search(
    matrix: NspMatrix,
    k_starts: int = 5,
    beam_width: int = 5,
    target_len: int = 10,
) -> SummaryPath:
    """Beam search from each of the first k_starts candidates; paths extend to
    any later position.  Full-length paths are preferred; the best path across
    starts wins by score, ties by lexicographically smallest index sequence."""
    if k_starts < 1 or beam_width < 1 or target_len < 1:
        raise ValueError("k_starts, beam_width and target_len must be positive")
    best: SummaryPath | None = None
    for start in range(min(k_starts, matrix.size)):
        candidate = _beam_from_start(matrix, start, beam_width, target_len)
        if best is None:
            best = candidate
            continue
        # prefer longer paths across starts too, then score, then indices
        key = lambda p: (-len(p.indices), -p.score, p.indices)
        if key(candidate) < key(best):
            best = candidate
    assert best is not None
    return best


def realize(path: SummaryPath, candidates: CandidateSet) -> list[Sentence]:
    """Map a candidate-index path back to document sentences, in order."""
    members = candidates.members
    for i in path.indices:
        if not 0 <= i < len(members):
            raise IndexError(f"path index {i} outside candidate set of {len(members)}")
    return [members[i].sentence for i in path.indices]
