"""Entry-selection schedules for partial information exchange.

A schedule partitions the state indices {1..n} into ordered subsets
J_1..J_theta. At consensus step l every node broadcasts only the rows of
its information matrix (and entries of its information vector) whose
indices lie in the subset for that step; subsets cycle with period theta.
The subsets must be nonempty, pairwise disjoint, and cover {1..n}, so the
masks of one full cycle sum to the identity.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class EntrySelectionSchedule:
    """Cyclic family of diagonal 0/1 selection masks over an n-dim state.

    `subsets` keeps the user-facing 1-based index sets; `rows` holds the
    equivalent 0-based row-index arrays used everywhere internally.
    """

    n: int
    subsets: tuple[tuple[int, ...], ...]
    rows: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def theta_bar(self) -> int:
        """Number of distinct masks in one cycle."""
        return len(self.subsets)

    @property
    def masks(self) -> list[np.ndarray]:
        """The n x n diagonal 0/1 mask matrices, in cycle order."""
        return [np.diag(self.mask_vector(z)) for z in range(self.theta_bar)]

    def mask_vector(self, zeta: int) -> np.ndarray:
        """Length-n 0/1 indicator of the zeta-th subset."""
        v = np.zeros(self.n)
        v[self.rows[zeta]] = 1.0
        return v

    def rows_at(self, l: int) -> np.ndarray:
        """0-based selected row indices for consensus step l."""
        return self.rows[l % self.theta_bar]

    def is_identity(self) -> bool:
        return self.theta_bar == 1


def build_schedule(n: int, subsets) -> EntrySelectionSchedule:
    """Validate 1-based index subsets and build the mask schedule.

    The subsets must partition {1..n}: every subset nonempty, pairwise
    disjoint, union equal to {1..n}. Raises ConfigurationError otherwise.
    """
    if n < 1:
        raise ConfigurationError(f"state dimension must be >= 1, got {n}")
    subsets = [tuple(sorted(int(i) for i in s)) for s in subsets]
    if not subsets:
        raise ConfigurationError("schedule needs at least one subset")

    full = set(range(1, n + 1))
    seen: set[int] = set()
    for s in subsets:
        if len(s) == 0:
            raise ConfigurationError("empty selection subset (cardinality must be >= 1)")
        if len(set(s)) != len(s):
            raise ConfigurationError(f"duplicate indices within subset {s}")
        if not set(s) <= full:
            raise ConfigurationError(f"subset {s} has indices outside 1..{n}")
        if seen & set(s):
            raise ConfigurationError(
                f"subsets overlap on indices {sorted(seen & set(s))}; "
                "selection subsets must be pairwise disjoint"
            )
        seen |= set(s)
    if seen != full:
        missing = sorted(full - seen)
        raise ConfigurationError(f"subsets do not cover indices {missing} of 1..{n}")

    rows = tuple(np.array([i - 1 for i in s], dtype=np.intp) for s in subsets)
    return EntrySelectionSchedule(n=n, subsets=tuple(subsets), rows=rows)


def mask_at(schedule: EntrySelectionSchedule, l: int) -> np.ndarray:
    """Diagonal mask matrix used at consensus step l (cyclic in l)."""
    if l < 0:
        raise ConfigurationError(f"consensus step index must be >= 0, got {l}")
    return np.diag(schedule.mask_vector(l % schedule.theta_bar))


def theta_bar_for(n: int, m: int) -> int:
    """Number of masks needed when m entries are selected per step: ceil(n/m)."""
    if not 1 <= m <= n:
        raise ConfigurationError(f"entries per step must satisfy 1 <= m <= n, got m={m}, n={n}")
    return -(-n // m)


def default_schedule(n: int, kind: str) -> EntrySelectionSchedule:
    """Built-in schedules: 'case1' (2 entries/step, strided), 'case2'
    (1 entry/step), 'identity' (full exchange)."""
    if kind == "identity":
        return build_schedule(n, [tuple(range(1, n + 1))])
    if kind == "case1":
        tb = theta_bar_for(n, 2)
        subsets = [tuple(range(z + 1, n + 1, tb)) for z in range(tb)]
        return build_schedule(n, subsets)
    if kind == "case2":
        return build_schedule(n, [(i,) for i in range(1, n + 1)])
    raise ConfigurationError(f"unknown schedule kind {kind!r}")
