"""OMP recovery and the Monte-Carlo recovery experiments.

Every trial draws from its own generator seeded by ``(seed, point, trial)``,
so aggregates do not depend on how trials are scheduled across workers.
"""
from __future__ import annotations

import io
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ConfigError, DomainError
from .sensing import SensingMatrix, construct_example1, construct_example2

__all__ = [
    "SparseSignal",
    "ExperimentConfig",
    "PointResult",
    "ExperimentResult",
    "SNR_CAP_DB",
    "generate_sparse_signal",
    "measure",
    "omp",
    "omp_trace",
    "gaussian_matrix",
    "output_snr_db",
    "build_matrix",
    "run_trial",
    "run_recovery_vs_sparsity",
    "run_snr_sweep",
]

SNR_CAP_DB = 300.0


@dataclass(frozen=True)
class SparseSignal:
    n: int
    support: tuple[int, ...]
    values: tuple[float, ...]

    @property
    def k(self) -> int:
        return len(self.support)

    def to_dense(self) -> np.ndarray:
        x = np.zeros(self.n)
        x[list(self.support)] = self.values
        return x


def generate_sparse_signal(n: int, k: int, rng: np.random.Generator) -> SparseSignal:
    """Uniform random support of size ``k``, i.i.d. standard normal values."""
    if not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got k={k}, n={n}")
    support = np.sort(rng.choice(n, size=k, replace=False))
    values = rng.standard_normal(k)
    return SparseSignal(n, tuple(int(i) for i in support), tuple(float(v) for v in values))


def _entries(A) -> np.ndarray:
    return A.entries if isinstance(A, SensingMatrix) else np.asarray(A)


def measure(A, x, input_snr_db: float | None = None,
            rng: np.random.Generator | None = None) -> np.ndarray:
    """``y = A x``, plus Gaussian noise at ``input_snr_db`` when given.

    Noise power is ``||Ax||^2 / 10**(snr/10)`` in expectation.  For complex
    ``A`` it is split evenly between the real and imaginary parts.
    """
    a = _entries(A)
    if isinstance(x, SparseSignal):
        x = x.to_dense()
    x = np.asarray(x)
    if x.shape != (a.shape[1],):
        raise DomainError(f"signal length {x.shape} does not match {a.shape[1]} columns")
    y = a @ x
    if input_snr_db is None:
        return y
    if rng is None:
        raise DomainError("a generator is required for noisy measurements")
    m = y.shape[0]
    power = float(np.vdot(y, y).real) / 10 ** (input_snr_db / 10)
    if np.iscomplexobj(y):
        sigma = math.sqrt(power / (2 * m))
        noise = sigma * (rng.standard_normal(m) + 1j * rng.standard_normal(m))
    else:
        noise = math.sqrt(power / m) * rng.standard_normal(m)
    return y + noise


def omp_trace(A, y, k: int | None = None, tol: float | None = None):
    """OMP that also returns the selection order and the residual after each step.

    Returns
    -------
    xhat : ndarray
    support : list of int
        Selected columns in selection order.
    residuals : list of ndarray
    """
    a = _entries(A)
    m, n = a.shape
    if k is None and tol is None:
        raise DomainError("give the sparsity k or a residual tolerance")
    if k is not None and not 1 <= k <= m:
        raise DomainError(f"need 1 <= k <= m={m}, got k={k}")
    y = np.asarray(y)
    norms = np.linalg.norm(a, axis=0)
    ah = a.conj().T
    residual = y.copy()
    support: list[int] = []
    residuals = []
    coef = np.zeros(0, dtype=np.result_type(a, y))
    for _ in range(k if k is not None else m):
        corr = np.abs(ah @ residual) / norms
        corr[support] = -1.0
        # argmax returns the first maximum: ties go to the lowest index
        support.append(int(np.argmax(corr)))
        sub = a[:, support]
        coef, _, rank, _ = np.linalg.lstsq(sub, y, rcond=None)
        if rank < len(support):
            warnings.warn("selected columns are rank deficient; using the pseudo-inverse fit",
                          RuntimeWarning, stacklevel=2)
        residual = y - sub @ coef
        residuals.append(residual)
        if tol is not None and np.linalg.norm(residual) <= tol:
            break
    xhat = np.zeros(n, dtype=coef.dtype)
    xhat[support] = coef
    return xhat, support, residuals


def omp(A, y, k: int | None = None, tol: float | None = None) -> np.ndarray:
    """Orthogonal matching pursuit.

    With ``k`` runs exactly ``k`` iterations; with only ``tol`` stops once the
    residual norm drops to ``tol`` (at most ``m`` iterations).
    """
    return omp_trace(A, y, k, tol)[0]


def gaussian_matrix(m: int, n: int, rng: np.random.Generator) -> SensingMatrix:
    if m < 1 or n < 1:
        raise DomainError(f"need m, n >= 1, got {m}x{n}")
    g = rng.standard_normal((m, n))
    g /= np.linalg.norm(g, axis=0)
    return SensingMatrix(g, {"construction": "gaussian", "params": {"m": m, "n": n}})


def output_snr_db(x, xhat) -> float:
    """``10 log10(||x||^2 / ||x - xhat||^2)``, capped at ``SNR_CAP_DB``."""
    x = np.asarray(x)
    err = float(np.sum(np.abs(x - xhat) ** 2))
    sig = float(np.sum(np.abs(x) ** 2))
    if err == 0.0:
        return SNR_CAP_DB
    if sig == 0.0:
        return -SNR_CAP_DB
    return min(10 * math.log10(sig / err), SNR_CAP_DB)


# -- experiments -----------------------------------------------------------------

_MATRIX_KINDS = ("example1", "example2", "example3", "example4", "gaussian", "file")


def build_matrix(source: dict, seed: int = 0) -> SensingMatrix:
    """Resolve a matrix source such as ``{"kind": "example1", "p": 5}``.

    Gaussian sources without their own ``seed`` derive one from ``seed``.
    """
    kind = source.get("kind")
    if kind == "example1":
        return construct_example1(int(source["p"]))
    if kind == "example2":
        return construct_example2(int(source["p"]))
    if kind in ("example3", "example4"):
        from .resize import construct_example3, construct_example4

        if kind == "example3":
            return construct_example3(int(source["q"]), int(source["k"]))[0]
        return construct_example4(int(source["p"]), samples=10_000)[0]
    if kind == "gaussian":
        s = source.get("seed")
        rng = np.random.default_rng(s if s is not None else [seed, 0x9A055])
        return gaussian_matrix(int(source["m"]), int(source["n"]), rng)
    if kind == "file":
        from .io import load_matrix

        return load_matrix(source["path"])
    raise ConfigError(f"unknown matrix kind {kind!r}; expected one of {_MATRIX_KINDS}")


@dataclass(frozen=True)
class ExperimentConfig:
    """One scenario: a matrix source and the axis to sweep.

    ``sparsities`` drives a recovery-vs-sparsity run (noiseless when
    ``snr_db`` is ``None``, else at the single SNR ``snr_db[0]``).  ``k`` plus
    ``snr_db`` drives an SNR sweep.
    """

    matrix: dict
    trials: int = 500
    sparsities: tuple[int, ...] | None = None
    k: int | None = None
    snr_db: tuple[float, ...] | None = None
    seed: int = 0
    threshold: float = 1e-3
    stop_tol: float | None = None
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.sparsities is not None:
            object.__setattr__(self, "sparsities", tuple(int(s) for s in self.sparsities))
            if not self.sparsities:
                raise ConfigError("empty sparsity range")
            if min(self.sparsities) < 1:
                raise ConfigError("sparsity values must be >= 1")
        if self.snr_db is not None:
            object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))
            if not self.snr_db:
                raise ConfigError("empty SNR grid")
        if self.threshold <= 0:
            raise ConfigError("success threshold must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def to_dict(self) -> dict:
        """Config echo; ``workers`` is left out because it never changes results."""
        d = asdict(self)
        d.pop("workers")
        for key in ("sparsities", "snr_db"):
            if d[key] is not None:
                d[key] = list(d[key])
        return d


@dataclass(frozen=True)
class PointResult:
    x: float
    recovery_pct: float
    mean_output_snr_db: float
    trials: int
    seed: int


@dataclass
class ExperimentResult:
    scenario: str
    points: list[PointResult]
    matrix: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("x_axis_value,recovery_pct,mean_output_snr_db,trials\n")
        for pt in self.points:
            x = int(pt.x) if float(pt.x).is_integer() else pt.x
            buf.write(f"{x},{pt.recovery_pct!r},{pt.mean_output_snr_db!r},{pt.trials}\n")
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "matrix": self.matrix,
            "config": self.config,
            "points": [asdict(p) for p in self.points],
        }


def run_trial(A: SensingMatrix, k: int, snr_db: float | None, rng: np.random.Generator,
              threshold: float = 1e-3, stop_tol: float | None = None) -> tuple[bool, float]:
    """One draw: returns ``(success, output_snr_db)``."""
    sig = generate_sparse_signal(A.n, k, rng)
    x = sig.to_dense()
    y = measure(A, x, snr_db, rng)
    xhat = omp(A, y, k=None if stop_tol is not None else k, tol=stop_tol)
    err = np.linalg.norm(x - xhat) / np.linalg.norm(x)
    return bool(err <= threshold), output_snr_db(x, xhat)


def _run_point(A, k, snr, point, cfg: ExperimentConfig, pool) -> PointResult:
    def one(t):
        rng = np.random.default_rng([cfg.seed, point, t])
        return run_trial(A, k, snr, rng, cfg.threshold, cfg.stop_tol)

    trials = range(cfg.trials)
    outcomes = list(pool.map(one, trials)) if pool is not None else [one(t) for t in trials]
    wins = sum(ok for ok, _ in outcomes)
    mean_snr = float(np.mean([s for _, s in outcomes]))
    x = float(k) if snr is None or cfg.sparsities is not None else float(snr)
    return PointResult(x, 100.0 * wins / cfg.trials, mean_snr, cfg.trials, cfg.seed)


def _matrix_meta(A: SensingMatrix) -> dict:
    return {"m": A.m, "n": A.n, "construction": A.provenance.get("construction"),
            "params": A.provenance.get("params", {})}


def _with_pool(cfg: ExperimentConfig, fn):
    if cfg.workers == 1:
        return fn(None)
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return fn(pool)


def run_recovery_vs_sparsity(cfg: ExperimentConfig, A: SensingMatrix | None = None) -> ExperimentResult:
    """Recovery percentage and mean output SNR for each sparsity in ``cfg.sparsities``."""
    if cfg.sparsities is None:
        raise ConfigError("recovery-vs-sparsity needs a sparsity range")
    A = build_matrix(cfg.matrix, cfg.seed) if A is None else A
    if max(cfg.sparsities) > A.m:
        raise ConfigError(f"sparsity {max(cfg.sparsities)} exceeds the {A.m} measurements")
    snr = cfg.snr_db[0] if cfg.snr_db else None
    points = _with_pool(cfg, lambda pool: [
        _run_point(A, k, snr, i, cfg, pool) for i, k in enumerate(cfg.sparsities)
    ])
    return ExperimentResult("sparsity", points, _matrix_meta(A), cfg.to_dict())


def run_snr_sweep(cfg: ExperimentConfig, A: SensingMatrix | None = None) -> ExperimentResult:
    """Mean output SNR (and recovery percentage) for each input SNR in ``cfg.snr_db``."""
    if cfg.k is None or cfg.snr_db is None:
        raise ConfigError("an SNR sweep needs a fixed k and an SNR grid")
    A = build_matrix(cfg.matrix, cfg.seed) if A is None else A
    if cfg.k > A.m:
        raise ConfigError(f"sparsity {cfg.k} exceeds the {A.m} measurements")
    points = _with_pool(cfg, lambda pool: [
        _run_point(A, cfg.k, s, i, cfg, pool) for i, s in enumerate(cfg.snr_db)
    ])
    return ExperimentResult("snr", points, _matrix_meta(A), cfg.to_dict())
