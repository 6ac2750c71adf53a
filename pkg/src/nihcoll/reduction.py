"""Randomized reduction from k-party NIH disjointness to collision finding.

Players holding x^(1..k) in {0,1}^(m^(k-1)) build, without talking, their
columns of a matrix whose rows are pairwise distinct exactly when the sets are
disjoint. Fake rows force a collision to exist, and a shared row shuffle plus
private alphabet relabelings hide which rows are fake from the solver. Any
verified collision between two real rows certifies intersection.

Symbols: player p's entry in a real row fuses a gadget bit g and a log2(m)-bit
slice s of the row's block index as ``g * m + s``, so the local alphabet is
exactly range(2m).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Callable

import numpy as np

from .collision import CollInstance, greedy_protocol
from .gadget import gadget_matrices
from .rng import make_rng, trial_rng
from .transcript import Transcript

REPETITIONS = 5
MAX_FAKE_ATTEMPTS = 10_000
MAX_EXHAUSTIVE_TUPLES = 1 << 20


def _log2_exact(m: int) -> int:
    if m < 1 or m & (m - 1):
        raise ValueError(f"m must be a power of two, got {m}")
    return m.bit_length() - 1


def _ceil_log2(x: int) -> int:
    return (x - 1).bit_length() if x > 1 else 0


def tilde_rows(k: int, m: int) -> int:
    """Row count of the augmented matrix: m^k 2^k real rows plus 2^(k-1) m fake rows."""
    return m**k * 2**k + 2 ** (k - 1) * m


@dataclass(frozen=True, eq=False)
class DisjInstance:
    k: int
    universe: int
    sets: np.ndarray  # shape (k, universe), 0/1

    def __post_init__(self):
        arr = np.asarray(self.sets, dtype=np.int64)
        if arr.shape != (self.k, self.universe):
            raise ValueError(f"sets must have shape ({self.k}, {self.universe}), got {arr.shape}")
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise ValueError("sets must be 0/1 strings")
        arr.setflags(write=False)
        object.__setattr__(self, "sets", arr)

    def common_elements(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.sets.all(axis=0))]

    def is_disjoint(self) -> bool:
        return not self.sets.all(axis=0).any()

    @classmethod
    def random(cls, k: int, universe: int, rng, intersecting: bool | None = None) -> DisjInstance:
        """Uniform sets; ``intersecting`` forces a common element or removes all of them."""
        rng = make_rng(rng)
        sets = rng.integers(0, 2, size=(k, universe), dtype=np.int64)
        if intersecting is True:
            sets[:, rng.integers(universe)] = 1
        elif intersecting is False:
            for i in np.flatnonzero(sets.all(axis=0)):
                sets[rng.integers(k), i] = 0
        return cls(k, universe, sets)


@dataclass(frozen=True, eq=False)
class ReductionArtifact:
    m: int
    k: int
    tilde_m: int
    tilde_ell: int
    matrix: np.ndarray  # (tilde_m, k) symbols in range(2m)
    fake_row_indices: frozenset[int]
    row_perm: np.ndarray  # row r of the unshuffled matrix lands at row_perm[r]
    alphabet_perms: np.ndarray  # (k, 2m)

    def as_instance(self) -> CollInstance:
        return CollInstance(self.k, self.tilde_m, self.tilde_ell, self.matrix.T)

    def to_json(self) -> str:
        return json.dumps(
            {
                "m": self.m,
                "k": self.k,
                "tilde_m": self.tilde_m,
                "tilde_ell": self.tilde_ell,
                "matrix": self.matrix.tolist(),
                "fake_row_indices": sorted(self.fake_row_indices),
                "row_perm": self.row_perm.tolist(),
                "alphabet_perms": self.alphabet_perms.tolist(),
            }
        )


def index_block(j: int, m: int, k: int) -> np.ndarray:
    """2^k identical rows, each the (k log2 m)-bit MSB-first expansion of j."""
    log_m = _log2_exact(m)
    if not 0 <= j < m**k:
        raise ValueError(f"j must lie in [0, {m ** k})")
    width = k * log_m
    row = [(j >> (width - 1 - c)) & 1 for c in range(width)]
    return np.tile(np.array(row, dtype=np.uint8), (2**k, 1)).reshape(2**k, width)


def _index_slices(m: int, k: int, log_m: int) -> np.ndarray:
    # (m^k, k): slice p of bin(j) for every j
    j = np.arange(m**k, dtype=np.int64)[:, None]
    shifts = (k - 1 - np.arange(k, dtype=np.int64)) * log_m
    return (j >> shifts) & (m - 1)


def _gadget_arrays(k: int) -> tuple[np.ndarray, np.ndarray]:
    pair = gadget_matrices(k)
    return pair.m0.to_array().astype(np.int64), pair.m1.to_array().astype(np.int64)


def _check_params(k: int, universe: int, m: int) -> int:
    log_m = _log2_exact(m)
    if universe != m ** (k - 1):
        raise ValueError(f"universe must be m^(k-1) = {m ** (k - 1)}, got {universe}")
    return log_m


def build_tilde_matrix(disj: DisjInstance, m: int) -> np.ndarray:
    """The m^k 2^k x k symbol matrix before fake rows are appended.

    Rows come in blocks of 2^k: block j = i*m + r (element i, repetition r)
    pairs the gadget mixture for (x^(1)_i, ..., x^(k)_i) with index j.
    """
    k = disj.k
    log_m = _check_params(k, disj.universe, m)
    m0, m1 = _gadget_arrays(k)
    b = disj.sets.T  # (U, k)
    gadget = np.where(b[:, None, :] == 1, m1[None], m0[None])  # (U, 2^k, k)
    slices = _index_slices(m, k, log_m).reshape(disj.universe, m, k)
    symbols = gadget[:, None, :, :] * m + slices[:, :, None, :]
    return symbols.reshape(-1, k)


def player_tilde_column(x_p, p: int, k: int, m: int) -> np.ndarray:
    """Player p's column of the tilde matrix, computed from x^(p) alone."""
    x_p = np.asarray(x_p, dtype=np.int64)
    log_m = _check_params(k, x_p.shape[0], m)
    m0, m1 = _gadget_arrays(k)
    gadget = np.where(x_p[:, None] == 1, m1[None, :, p], m0[None, :, p])  # (U, 2^k)
    slices = _index_slices(m, k, log_m)[:, p].reshape(x_p.shape[0], m)
    return (gadget[:, None, :] * m + slices[:, :, None]).reshape(-1)


def gen_fake_rows(k: int, m: int, rng) -> np.ndarray:
    """2^(k-1) m pairwise distinct rows; each column hits every symbol 2^(k-2) times.

    Each column is an independent shuffle of the balanced multiset; the whole
    draw is repeated until no two rows coincide.
    """
    if k < 2:
        raise ValueError("fake rows need k >= 2 (each symbol must appear 2^(k-2) times)")
    _log2_exact(m)
    rng = make_rng(rng)
    base = np.repeat(np.arange(2 * m, dtype=np.int64), 2 ** (k - 2))
    for _ in range(MAX_FAKE_ATTEMPTS):
        rows = np.stack([rng.permutation(base) for _ in range(k)], axis=1)
        if len(np.unique(rows, axis=0)) == len(rows):
            return rows
    raise RuntimeError(f"no distinct fake rows after {MAX_FAKE_ATTEMPTS} attempts")


def apply_permutations(matrix, fake_indices, row_perm, alphabet_perms) -> tuple[np.ndarray, frozenset[int]]:
    matrix = np.asarray(matrix, dtype=np.int64)
    row_perm = np.asarray(row_perm, dtype=np.int64)
    alphabet_perms = np.asarray(alphabet_perms, dtype=np.int64)
    relabeled = np.stack([alphabet_perms[p][matrix[:, p]] for p in range(matrix.shape[1])], axis=1)
    out = np.empty_like(relabeled)
    out[row_perm] = relabeled
    return out, frozenset(int(row_perm[r]) for r in fake_indices)


def shuffle(matrix, fake_indices, rng, alphabet_size: int | None = None) -> ReductionArtifact:
    """Shared uniform row permutation, then an independent relabeling per player."""
    rng = make_rng(rng)
    matrix = np.asarray(matrix, dtype=np.int64)
    rows, k = matrix.shape
    if alphabet_size is None:
        alphabet_size = int(matrix.max()) + 1 if matrix.size else 1
    row_perm = rng.permutation(rows)
    alphabet_perms = np.stack([rng.permutation(alphabet_size) for _ in range(k)])
    out, fakes = apply_permutations(matrix, fake_indices, row_perm, alphabet_perms)
    return ReductionArtifact(
        m=alphabet_size // 2,
        k=k,
        tilde_m=rows,
        tilde_ell=alphabet_size,
        matrix=out,
        fake_row_indices=fakes,
        row_perm=row_perm,
        alphabet_perms=alphabet_perms,
    )


def build_artifact(disj: DisjInstance, m: int, rng) -> ReductionArtifact:
    """One shuffled copy of the augmented matrix."""
    rng = make_rng(rng)
    tilde = build_tilde_matrix(disj, m)
    fake = gen_fake_rows(disj.k, m, rng)
    full = np.vstack([tilde, fake])
    fake_idx = range(len(tilde), len(full))
    return shuffle(full, fake_idx, rng, alphabet_size=2 * m)


def player_part(x_p, p: int, k: int, m: int, rng) -> np.ndarray:
    """Player p's column of ``build_artifact`` from x^(p) and the shared randomness only."""
    rng = make_rng(rng)
    column = player_tilde_column(x_p, p, k, m)
    fake = gen_fake_rows(k, m, rng)[:, p]
    full = np.concatenate([column, fake])
    row_perm = rng.permutation(len(full))
    perms = [rng.permutation(2 * m) for _ in range(k)]
    out = np.empty_like(full)
    out[row_perm] = perms[p][full]
    return out


def _row_codes(matrix: np.ndarray) -> np.ndarray:
    _, inverse = np.unique(np.asarray(matrix), axis=0, return_inverse=True)
    return inverse.reshape(-1)


def count_real_collisions(matrix, fake_indices=()) -> tuple[int, int]:
    """(pairs of equal real rows, equal pairs touching at least one fake row)."""
    matrix = np.asarray(matrix)
    if len(matrix) == 0:
        return 0, 0
    codes = _row_codes(matrix)
    is_fake = np.zeros(len(matrix), dtype=bool)
    is_fake[list(fake_indices)] = True
    total = np.bincount(codes)
    real = np.bincount(codes[~is_fake], minlength=len(total))
    real_pairs = int((real * (real - 1) // 2).sum())
    all_pairs = int((total * (total - 1) // 2).sum())
    return real_pairs, all_pairs - real_pairs


# -- solvers --------------------------------------------------------------
#
# A solver maps (instance, rng) to (pair or None, transcript). It sees only the
# shuffled symbols, never which rows are fake.

Solver = Callable[[CollInstance, np.random.Generator], "tuple[tuple[int, int] | None, Transcript]"]


def _disclosure_transcript(inst: CollInstance) -> Transcript:
    # oracle solvers are charged the trivial protocol: all but the last player
    # broadcast their whole input, the last player announces the pair
    t = Transcript(inst.k)
    for p in range(inst.k - 1):
        t.send(p, inst.m * _ceil_log2(inst.ell), "disclose")
    t.send(inst.k - 1, 2 * _ceil_log2(inst.m), "pair")
    return t


def _groups(inst: CollInstance) -> list[list[int]]:
    groups: dict[tuple, list[int]] = {}
    for i in range(inst.m):
        groups.setdefault(inst.column(i), []).append(i)
    return [g for g in groups.values() if len(g) > 1]


def scan_solver(inst: CollInstance, rng=None):
    """Zero-error: the first row that repeats an earlier one, paired with its first copy."""
    seen: dict[tuple, int] = {}
    pair = None
    for j in range(inst.m):
        key = inst.column(j)
        if key in seen:
            pair = (seen[key], j)
            break
        seen[key] = j
    t = _disclosure_transcript(inst)
    t.output = pair
    return pair, t


def honest_solver(inst: CollInstance, rng=None):
    """Zero-error: runs the deterministic greedy protocol."""
    run = greedy_protocol(inst)
    return run.pair, run.transcript


def adversarial_solver(inst: CollInstance, rng):
    """Fails outright with probability 1/3; otherwise picks a random pair in a largest group."""
    rng = make_rng(rng)
    t = _disclosure_transcript(inst)
    if rng.random() < 1 / 3:
        return None, t
    groups = _groups(inst)
    if not groups:
        return None, t
    size = max(len(g) for g in groups)
    largest = [g for g in groups if len(g) == size]
    group = largest[rng.integers(len(largest))]
    a, b = rng.choice(len(group), size=2, replace=False)
    pair = tuple(sorted((group[int(a)], group[int(b)])))
    t.output = pair
    return pair, t


SOLVERS: dict[str, Solver] = {
    "honest": honest_solver,
    "scan": scan_solver,
    "adversarial": adversarial_solver,
}


@dataclass
class DisjDecision:
    disjoint: bool
    transcript: Transcript
    outcomes: list[str] = field(default_factory=list)  # per copy: real|fake|false|invalid|none

    @property
    def real_detected(self) -> int:
        return self.outcomes.count("real")


def verification_bits(k: int, m: int) -> int:
    """Bits to check one claimed pair: both symbols from every player, plus both row indices."""
    return 2 * k * (_log2_exact(m) + 1) + 2 * _ceil_log2(tilde_rows(k, m))


def decide_disjointness(
    disj: DisjInstance, m: int, solver: str | Solver, rng, repetitions: int = REPETITIONS
) -> DisjDecision:
    """Run the solver on independent shuffled copies and look for a verified real collision.

    NOT-DISJOINT is reported only with a verified real collision in hand, so
    that verdict is never wrong. Malformed solver output counts as a failed claim.
    """
    if isinstance(solver, str):
        solver = SOLVERS[solver]
    rng = make_rng(rng)
    k = disj.k
    log_m = _log2_exact(m)
    transcript = Transcript(k)
    outcomes = []
    for rep in range(repetitions):
        art = build_artifact(disj, m, rng)
        inst = art.as_instance()
        pair, solver_t = solver(inst, rng)
        transcript.extend(solver_t, prefix=f"copy{rep}:")
        if pair is None:
            outcomes.append("none")
            continue
        try:
            i, j = (int(v) for v in pair)
        except (TypeError, ValueError):
            outcomes.append("invalid")
            continue
        if i == j or not (0 <= i < art.tilde_m and 0 <= j < art.tilde_m):
            outcomes.append("invalid")
            continue
        for p in range(k):
            transcript.send(p, 2 * (log_m + 1), f"copy{rep}:verify-symbols")
        transcript.send(0, 2 * _ceil_log2(art.tilde_m), f"copy{rep}:verify-indices")
        if not inst.collides(i, j):
            outcomes.append("false")
        elif i in art.fake_row_indices or j in art.fake_row_indices:
            outcomes.append("fake")
        else:
            outcomes.append("real")
    return DisjDecision(disjoint="real" not in outcomes, transcript=transcript, outcomes=outcomes)


@dataclass(frozen=True)
class ClaimsReport:
    k: int
    m: int
    tuples_checked: int
    disjoint_ok: bool
    intersecting_ok: bool
    failures: tuple = ()

    @property
    def ok(self) -> bool:
        return self.disjoint_ok and self.intersecting_ok

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "m": self.m,
            "tuples_checked": self.tuples_checked,
            "disjoint_ok": self.disjoint_ok,
            "intersecting_ok": self.intersecting_ok,
            "ok": self.ok,
            "failures": [list(map(list, f)) for f in self.failures],
        }


def check_claims_exhaustive(k: int, m: int, limit: int = MAX_EXHAUSTIVE_TUPLES) -> ClaimsReport:
    """Both structural claims on every input tuple.

    Disjoint inputs must give pairwise distinct rows; c common elements must
    give at least c * 2^(k-1) * m pairs of equal rows.
    """
    universe = m ** (k - 1)
    total = 2 ** (universe * k)
    if total > limit:
        raise ValueError(f"{total} input tuples exceeds the enumeration limit of {limit}")
    per_element = 2 ** (k - 1) * m
    disjoint_ok = intersecting_ok = True
    failures = []
    subsets = list(product((0, 1), repeat=universe))
    for sets in product(subsets, repeat=k):
        disj = DisjInstance(k, universe, np.array(sets, dtype=np.int64).reshape(k, universe))
        real, _ = count_real_collisions(build_tilde_matrix(disj, m))
        c = len(disj.common_elements())
        if c == 0 and real != 0:
            disjoint_ok = False
            failures.append(sets)
        elif c > 0 and real < c * per_element:
            intersecting_ok = False
            failures.append(sets)
    return ClaimsReport(k, m, total, disjoint_ok, intersecting_ok, tuple(failures[:10]))


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    disjoint_input: bool
    verdict_disjoint: bool
    real_detected: int
    bits_total: int


def run_trials(
    k: int,
    m: int,
    solver: str | Solver,
    master_seed: int,
    trials: int,
    inputs: str = "intersecting",
    repetitions: int = REPETITIONS,
) -> list[TrialRecord]:
    """Monte Carlo over fresh inputs; trial i draws everything from seed (master, i)."""
    if trials < 1:
        raise ValueError("trials must be positive")
    if isinstance(solver, str):
        solver = SOLVERS[solver]
    want = {"intersecting": True, "disjoint": False, "random": None}[inputs]
    records = []
    for trial in range(trials):
        rng = trial_rng(master_seed, trial)
        disj = DisjInstance.random(k, m ** (k - 1), rng, intersecting=want)
        decision = decide_disjointness(disj, m, solver, rng, repetitions=repetitions)
        records.append(
            TrialRecord(
                trial=trial,
                disjoint_input=disj.is_disjoint(),
                verdict_disjoint=decision.disjoint,
                real_detected=decision.real_detected,
                bits_total=decision.transcript.total_bits,
            )
        )
    return records


def success_bound(repetitions: int = REPETITIONS) -> float:
    """Lower bound on detecting an intersection: 1 - (7/9)^repetitions."""
    return 1 - (7 / 9) ** repetitions


PER_COPY_DETECTION = 2 / 9
