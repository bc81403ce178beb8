"""Random-subspace experiments on completely entangled subspaces."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .errors import BadDimension
from .matrix_core import Subspace, orthogonal_complement
from .product_search import SeesawConfig, is_completely_entangled

CSV_COLUMNS = ("trial_index", "verdict_E", "max_overlap_E", "verdict_Eperp", "max_overlap_Eperp")
MAX_AMBIENT = 20


def random_subspace(ambient: int, k: int, seed: int) -> Subspace:
    """Unitarily invariant random k-dim subspace: QR of a complex Gaussian matrix."""
    if not (0 < k <= ambient):
        raise BadDimension(f"need 0 < k <= {ambient}, got k={k}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((ambient, k)) + 1j * rng.standard_normal((ambient, k))
    q, _ = np.linalg.qr(g)
    return Subspace(q)


def _trial_seed(seed: int, trial: int) -> int:
    return int(np.random.SeedSequence([seed, trial]).generate_state(1, dtype=np.uint32)[0])


@dataclass(frozen=True)
class ExperimentSpec:
    m: int
    n: int
    k: int
    trials: int
    seed: int = 0
    cfg: SeesawConfig = field(default_factory=SeesawConfig)

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise BadDimension("local dimensions must be positive")
        if not (0 < self.k <= self.m * self.n):
            raise BadDimension(f"need 0 < k <= m*n = {self.m * self.n}, got k={self.k}")
        if self.trials < 1:
            raise BadDimension("trials must be >= 1")


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    verdict_E: str
    max_overlap_E: float
    verdict_Eperp: str
    max_overlap_Eperp: float


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    trials: list[TrialRecord]

    def counts(self, which: str = "E") -> dict[str, int]:
        key = "verdict_E" if which == "E" else "verdict_Eperp"
        out = {"entangled": 0, "has_product_vector": 0, "inconclusive": 0}
        for t in self.trials:
            out[getattr(t, key)] += 1
        return out

    @property
    def both_entangled(self) -> int:
        return sum(t.verdict_E == "entangled" and t.verdict_Eperp == "entangled" for t in self.trials)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for t in self.trials:
            w.writerow([t.trial_index, t.verdict_E, repr(t.max_overlap_E),
                        t.verdict_Eperp, repr(t.max_overlap_Eperp)])
        return buf.getvalue()

    def summary(self) -> str:
        ce, cp = self.counts("E"), self.counts("Eperp")
        s = self.spec
        return (f"m={s.m} n={s.n} k={s.k} trials={s.trials}: "
                f"E entangled={ce['entangled']} product-found={ce['has_product_vector']} "
                f"inconclusive={ce['inconclusive']}; "
                f"E_perp entangled={cp['entangled']} product-found={cp['has_product_vector']} "
                f"inconclusive={cp['inconclusive']}; both entangled={self.both_entangled}")


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    # the first tensor factor has dimension n, matching C^n (x) C^m
    dims = (spec.n, spec.m)
    ambient = spec.m * spec.n
    records = []
    for i in range(spec.trials):
        tseed = _trial_seed(spec.seed, i)
        space = random_subspace(ambient, spec.k, tseed)
        cfg = spec.cfg.replace(seed=tseed)
        ve = is_completely_entangled(space, dims, cfg)
        vp = is_completely_entangled(orthogonal_complement(space), dims, cfg)
        records.append(TrialRecord(i, ve.kind, ve.max_overlap, vp.kind, vp.max_overlap))
    return ExperimentResult(spec, records)
