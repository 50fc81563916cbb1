"""Clifford+T approximation of Z-axis rotations.

Two interchangeable backends produce letter sequences over {H, S, T, X, Z}
whose product approximates exp(-i*theta*Z) up to global phase:

* ``CacheBackend`` replays sequences from a text cache (one entry per
  line: ``<numerator>/2^<power> <epsilon> <letters>``), the route for
  externally synthesized high-precision sequences.
* ``SearchBackend`` finds sequences itself with a bounded meet-in-the-
  middle search over canonical T-words.  It is exhaustive up to its
  T-count budget, which makes it practical down to desk-scale epsilon
  (roughly 1e-3); beyond its budget it raises ``NoApproximationFound``.

Angles that are exact multiples of pi/8 short-circuit both backends and
come back as exact letters (pi/8 -> "T", pi/4 -> "S", ...).  Letter
strings are in execution order: the first letter acts first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .angles import ExactAngle
from .gates import GATE_MATRICES, sequence_unitary

LETTERS = "HSTXZ"


class NoApproximationFound(RuntimeError):
    """The bounded search exhausted its depth budget without meeting epsilon."""


class MissingCacheEntry(KeyError):
    """Cache-only mode was asked for an angle/precision it does not hold."""

    def __init__(self, angle: ExactAngle, epsilon: float):
        self.angle = angle
        self.epsilon = epsilon
        super().__init__(f"no cached sequence for {angle} at epsilon {epsilon:g}")


def exact_rotation_letters(angle: ExactAngle) -> str | None:
    """Exact letters when the angle is a multiple of pi/8, else None.

    exp(-i*k*pi/8*Z) decomposes into Z (k=4), S (k=2), T (k=1) factors;
    a pi flip (k=8) is a global phase and drops out.
    """
    k = angle.eighths()
    if k is None:
        return None
    k %= 8
    word = ""
    if k >= 4:
        word += "Z"
        k -= 4
    if k >= 2:
        word += "S"
        k -= 2
    if k >= 1:
        word += "T"
    return word


def rotation_target(angle_radians: float) -> np.ndarray:
    """Dense exp(-i*theta*Z)."""
    return np.array(
        [[math.cos(angle_radians) - 1j * math.sin(angle_radians), 0],
         [0, math.cos(angle_radians) + 1j * math.sin(angle_radians)]],
        dtype=complex,
    )


def _su2_quaternion(w: np.ndarray) -> np.ndarray:
    """Quaternion coordinates of U(2) matrices after phase normalization.

    For unitaries W = e^{i phi} (a I + i(b X + c Y + d Z)), returns
    (a, b, c, d).  The Euclidean distance between (sign-matched)
    quaternions equals the operator-norm distance up to global phase.
    """
    det = w[..., 0, 0] * w[..., 1, 1] - w[..., 0, 1] * w[..., 1, 0]
    r = w / np.sqrt(det)[..., None, None]
    a = (r[..., 0, 0] + r[..., 1, 1]).real / 2
    b = (r[..., 0, 1] + r[..., 1, 0]).imag / 2
    c = (r[..., 0, 1] - r[..., 1, 0]).real / 2
    d = (r[..., 0, 0] - r[..., 1, 1]).imag / 2
    return np.stack([a, b, c, d], axis=-1)


def sequence_error(letters: str, angle_radians: float) -> float:
    """Operator-norm distance (up to phase) from exp(-i*theta*Z)."""
    u = sequence_unitary(letters)
    q1 = _su2_quaternion(u)
    q2 = _su2_quaternion(rotation_target(angle_radians))
    return float(min(np.linalg.norm(q1 - q2), np.linalg.norm(q1 + q2)))


# ---------------------------------------------------------------------------
# cache backend
# ---------------------------------------------------------------------------

@dataclass
class ApproximationCache:
    """Angle -> (epsilon, letters) entries, multiple precisions per angle."""

    entries: dict[tuple[int, int], list[tuple[float, str]]] = field(default_factory=dict)

    def add(self, angle: ExactAngle, epsilon: float, letters: str) -> None:
        bucket = self.entries.setdefault((angle.numerator, angle.denom_power), [])
        bucket.append((epsilon, letters))
        bucket.sort(key=lambda item: item[0])

    def lookup(self, angle: ExactAngle, epsilon: float) -> str | None:
        """Coarsest stored sequence that still meets epsilon, or None."""
        bucket = self.entries.get((angle.numerator, angle.denom_power), [])
        adequate = [(e, s) for e, s in bucket if e <= epsilon]
        if not adequate:
            return None
        return adequate[-1][1]

    @classmethod
    def load(cls, path: str | Path) -> ApproximationCache:
        cache = cls()
        for line_number, raw in enumerate(Path(path).read_text().splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"{path}:{line_number}: expected '<n>/2^<p> <eps> <letters>'")
            angle_text, eps_text, letters = parts
            num_text, _, power_text = angle_text.partition("/2^")
            try:
                angle = ExactAngle(int(num_text), int(power_text))
                epsilon = float(eps_text)
            except ValueError as exc:
                raise ValueError(f"{path}:{line_number}: {exc}") from exc
            if letters == "-":
                letters = ""
            elif any(c not in LETTERS for c in letters):
                raise ValueError(f"{path}:{line_number}: bad letter in {letters!r}")
            cache.add(angle, epsilon, letters)
        return cache

    def save(self, path: str | Path) -> None:
        lines = []
        for (num, power), bucket in sorted(self.entries.items()):
            for epsilon, letters in bucket:
                lines.append(f"{num}/2^{power} {epsilon!r} {letters or '-'}")
        Path(path).write_text("\n".join(lines) + "\n")

    def verify(self) -> None:
        """Check every entry against its recorded precision (test support)."""
        for (num, power), bucket in self.entries.items():
            theta = ExactAngle(num, power).to_float()
            for epsilon, letters in bucket:
                achieved = sequence_error(letters, theta)
                if achieved > epsilon * (1 + 1e-9):
                    raise ValueError(
                        f"cache entry {num}/2^{power} claims {epsilon:g}, achieves {achieved:g}"
                    )


# ---------------------------------------------------------------------------
# bounded meet-in-the-middle search
# ---------------------------------------------------------------------------

def _clifford_words() -> list[tuple[np.ndarray, str]]:
    """The 24 single-qubit Cliffords (up to phase) with shortest H/S words."""
    seen: set[tuple] = set()
    out: list[tuple[np.ndarray, str]] = []
    frontier: list[tuple[np.ndarray, str]] = [(np.eye(2, dtype=complex), "")]
    while frontier:
        u, word = frontier.pop(0)
        key = tuple(np.round(_su2_quaternion(u) * np.where(_first_sign(u) < 0, -1, 1), 8))
        if key in seen:
            continue
        seen.add(key)
        out.append((u, word))
        for letter in "HS":
            # Appending in execution order: the new letter acts last.
            frontier.append((GATE_MATRICES[letter] @ u, word + letter))
    return out


def _first_sign(u: np.ndarray) -> float:
    q = _su2_quaternion(u)
    for x in q:
        if abs(x) > 1e-7:
            return math.copysign(1.0, x)
    return 1.0


_CLIFFORDS: list[tuple[np.ndarray, str]] | None = None


def _cliffords() -> list[tuple[np.ndarray, str]]:
    global _CLIFFORDS
    if _CLIFFORDS is None:
        _CLIFFORDS = _clifford_words()
    return _CLIFFORDS


def _pack_cells(idx: np.ndarray) -> np.ndarray:
    idx = idx.astype(np.int64) + (1 << 14)
    return (idx[..., 0] << 45) | (idx[..., 1] << 30) | (idx[..., 2] << 15) | idx[..., 3]


class _SyllableLayers:
    """Products of k syllables from {HT, SHT}, grown lazily and shared."""

    def __init__(self) -> None:
        t, h, s = GATE_MATRICES["T"], GATE_MATRICES["H"], GATE_MATRICES["S"]
        self._th = t @ h
        self._ths = t @ h @ s
        self._mats: list[np.ndarray] = [np.eye(2, dtype=complex)[None, :, :]]
        self._words: list[list[str]] = [[""]]

    def layer(self, depth: int) -> tuple[np.ndarray, list[str]]:
        while len(self._mats) <= depth:
            prev = self._mats[-1]
            grown = np.concatenate([
                np.einsum("ij,njk->nik", self._th, prev),
                np.einsum("ij,njk->nik", self._ths, prev),
            ])
            self._mats.append(grown)
            self._words.append(
                [w + "HT" for w in self._words[-1]] + [w + "SHT" for w in self._words[-1]]
            )
        return self._mats[depth], self._words[depth]


_LAYERS: _SyllableLayers | None = None


def _layers() -> _SyllableLayers:
    global _LAYERS
    if _LAYERS is None:
        _LAYERS = _SyllableLayers()
    return _LAYERS


@dataclass
class SearchBackend:
    """Deterministic bounded search; exhaustive up to 2*max_half T-syllables."""

    max_half: int = 17

    def approximate(self, angle: ExactAngle, epsilon: float) -> tuple[str, float]:
        theta = angle.to_float()
        identity_error = abs(2 * math.sin(theta / 2))
        if identity_error <= epsilon:
            return "", identity_error
        # T-count needed scales like 3*log2(1/eps); start slightly below.
        estimate = max(1, math.ceil(1.5 * math.log2(1 / epsilon)) - 1)
        best: tuple[float, str] = (identity_error, "")
        for half in range(min(estimate, self.max_half), self.max_half + 1):
            error, letters = self._search_at(theta, epsilon, half)
            if error < best[0]:
                best = (error, letters)
            if best[0] <= epsilon:
                return best[1], best[0]
        raise NoApproximationFound(
            f"no sequence within {epsilon:g} of Z-rotation by {angle} "
            f"(depth budget {2 * self.max_half} T gates, best {best[0]:.2e})"
        )

    def _search_at(self, theta: float, epsilon: float, half: int) -> tuple[float, str]:
        target = rotation_target(theta)
        mats, words = _layers().layer(half)
        n = mats.shape[0]
        quats = _su2_quaternion(mats)
        library = np.concatenate([quats, -quats])
        cell = 2 * epsilon
        library_keys = _pack_cells(np.floor(library / cell))
        order = np.argsort(library_keys, kind="stable")
        sorted_keys = library_keys[order]

        corners = np.array(
            [[(i >> 3) & 1, (i >> 2) & 1, (i >> 1) & 1, i & 1] for i in range(16)],
            dtype=float,
        )
        corners = (corners * 2 - 1) * epsilon

        best: tuple[float, str] = (math.inf, "")
        right_dagger = np.conj(np.swapaxes(mats, -1, -2))
        for cliff, cliff_word in _cliffords():
            # Want cliff @ A @ B ~ target, so A ~ cliff^dag @ target @ B^dag.
            wanted = np.einsum("ij,njk->nik", cliff.conj().T @ target, right_dagger)
            wanted_q = _su2_quaternion(wanted)
            probes = np.floor((wanted_q[:, None, :] + corners[None, :, :]) / cell)
            keys = _pack_cells(probes).reshape(-1)
            pos = np.searchsorted(sorted_keys, keys)
            pos = np.clip(pos, 0, len(sorted_keys) - 1)
            hits = np.nonzero(sorted_keys[pos] == keys)[0]
            for row in hits:
                right_index = int(row // 16)
                p = int(pos[row])
                while p < len(sorted_keys) and sorted_keys[p] == keys[row]:
                    left_index = int(order[p]) % n
                    q_left = quats[left_index]
                    q_want = wanted_q[right_index]
                    error = min(
                        float(np.linalg.norm(q_left - q_want)),
                        float(np.linalg.norm(q_left + q_want)),
                    )
                    if error < best[0]:
                        word = words[right_index] + words[left_index] + cliff_word
                        best = (error, word)
                    p += 1
            if best[0] <= epsilon:
                break
        return best[0], best[1]


@dataclass
class CacheBackend:
    """Replays previously synthesized sequences; never searches."""

    cache: ApproximationCache

    @classmethod
    def from_file(cls, path: str | Path) -> CacheBackend:
        return cls(ApproximationCache.load(path))

    def approximate(self, angle: ExactAngle, epsilon: float) -> tuple[str, float]:
        theta = angle.to_float()
        identity_error = abs(2 * math.sin(theta / 2))
        if identity_error <= epsilon:
            return "", identity_error
        letters = self.cache.lookup(angle, epsilon)
        if letters is None:
            raise MissingCacheEntry(angle, epsilon)
        return letters, sequence_error(letters, theta)


Backend = SearchBackend | CacheBackend


@dataclass
class Approximator:
    """Front door: exact angles bypass the backend, others go through it."""

    backend: Backend
    _memo: dict[tuple[int, int, float], str] = field(default_factory=dict)

    def letters_for(self, angle: ExactAngle, epsilon: float) -> str:
        if epsilon <= 0:
            raise ValueError("epsilon must be positive")
        exact = exact_rotation_letters(angle)
        if exact is not None:
            return exact
        key = (angle.numerator, angle.denom_power, epsilon)
        if key not in self._memo:
            letters, _ = self.backend.approximate(angle, epsilon)
            self._memo[key] = letters
        return self._memo[key]


def approximate_rotation(
    angle: ExactAngle, epsilon: float, backend: Backend | None = None
) -> str:
    """Letters over {H,S,T,X,Z} within epsilon of exp(-i*angle*Z), up to phase."""
    return Approximator(backend or SearchBackend()).letters_for(angle, epsilon)


def build_cache(
    angles: Iterable[ExactAngle],
    epsilon: float,
    backend: Backend | None = None,
) -> ApproximationCache:
    """Synthesize sequences for a set of angles into a reusable cache."""
    backend = backend or SearchBackend()
    cache = ApproximationCache()
    for angle in angles:
        if exact_rotation_letters(angle) is not None:
            continue
        letters, achieved = backend.approximate(angle, epsilon)
        # Record the true achieved error: the tightest honest bound.
        cache.add(angle, achieved, letters)
    return cache
