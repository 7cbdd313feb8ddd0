"""
模拟挑战生成器

- C-I（c1a: n_f=100，c1b: n_f=3000）：单一形状的 inlier，异常在同一构造上叠加高斯峰，σ = 0.3；
- C-II（c2a: n_f=100，c2b: n_f=3000）：9 个形状各产生 inlier，剩余形状产生异常，σ = 0.8。

每行先随机缩放（x_scale, y_scale ~ U(0.8, 1.2)）再加噪声 σ × 标准正态；
行顺序为全部 inlier 在前、异常在后。noise_sigma = 0 时仍消耗同一随机流，
因此同种子的无噪声数据与带噪声数据只差噪声项。
"""

import logging
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from drama.base.error_exceptions import UsageError
from drama.service.data.data_model import DataMatrix, Dataset, LabelVector
from drama.service.simgen.shapes import ShapeLibrary, gaussian_bump, sample_base

logger = logging.getLogger(__name__)

CHALLENGES = ("c1a", "c1b", "c2a", "c2b")

# challenge -> (n_f, noise_sigma, paper 规模 (inlier, 异常), desk 规模 (inlier, 异常))
_PRESETS: Dict[str, Tuple[int, float, Tuple[int, int], Tuple[int, int]]] = {
    "c1a": (100, 0.3, (1000, 50), (200, 20)),
    "c1b": (3000, 0.3, (1000, 50), (100, 10)),
    "c2a": (100, 0.8, (500, 50), (100, 10)),
    "c2b": (3000, 0.8, (500, 50), (100, 10)),
}


@dataclass(frozen=True)
class ChallengeSpec:
    """
    一次生成的全部参数

    shape 为 C-I 的基形状，anomaly_class 为 C-II 的异常类；n_inliers 对 C-II 是每个形状的数量。
    """

    challenge: str
    n_f: int
    n_inliers: int
    n_anomalies: int
    noise_sigma: float
    seed: int = 0
    shape: int = 0
    anomaly_class: int = 0
    amplitude_range: Tuple[float, float] = (0.3, 0.4)
    width_range: Tuple[float, float] = (0.08, 0.1)
    scale_range: Tuple[float, float] = (0.8, 1.2)

    def __post_init__(self):
        if self.challenge not in CHALLENGES:
            raise UsageError(
                f"未知的挑战: {self.challenge}，可选: {', '.join(CHALLENGES)}"
            )
        if self.n_f < 2:
            raise UsageError(f"特征数必须 >= 2: {self.n_f}")
        if self.n_inliers < 1 or self.n_anomalies < 0:
            raise UsageError(
                f"样本数无效: inlier={self.n_inliers}, 异常={self.n_anomalies}"
            )
        if self.noise_sigma < 0:
            raise UsageError(f"噪声标准差不能为负: {self.noise_sigma}")
        for k in (self.shape, self.anomaly_class):
            if not 0 <= k < ShapeLibrary.size():
                raise UsageError(f"形状编号必须在 [0, {ShapeLibrary.size()}) 内: {k}")

    @property
    def is_c1(self) -> bool:
        return self.challenge.startswith("c1")

    @classmethod
    def preset(
        cls, challenge: str, seed: int = 0, scale: str = "desk", **overrides
    ) -> "ChallengeSpec":
        """
        按挑战名与规模构造；形状/异常类默认取 seed mod 10
        """
        challenge = str(challenge).strip().lower()
        if challenge not in _PRESETS:
            raise UsageError(f"未知的挑战: {challenge}，可选: {', '.join(CHALLENGES)}")
        if scale not in ("desk", "paper"):
            raise UsageError(f"规模必须为 desk 或 paper: {scale}")
        n_f, sigma, paper_counts, desk_counts = _PRESETS[challenge]
        n_inliers, n_anomalies = paper_counts if scale == "paper" else desk_counts
        spec = cls(
            challenge=challenge,
            n_f=n_f,
            n_inliers=n_inliers,
            n_anomalies=n_anomalies,
            noise_sigma=sigma,
            seed=seed,
            shape=seed % ShapeLibrary.size(),
            anomaly_class=seed % ShapeLibrary.size(),
        )
        return replace(spec, **overrides) if overrides else spec

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class AnomalyRecord:
    """异常行的生成参数；C-II 异常没有高斯峰参数"""

    row: int
    shape: int
    x_scale: float
    y_scale: float
    amplitude: Optional[float] = None
    width: Optional[float] = None
    center: Optional[float] = None


@dataclass(frozen=True)
class GeneratedDataset:
    """生成结果：数据集、参数与异常记录"""

    dataset: Dataset
    spec: ChallengeSpec
    anomalies: List[AnomalyRecord] = field(default_factory=list)

    def to_metadata(self) -> Dict[str, Any]:
        return {
            "name": self.dataset.name,
            "n_d": self.dataset.data.n_d,
            "n_f": self.dataset.data.n_f,
            "spec": self.spec.to_dict(),
            "anomalies": [asdict(record) for record in self.anomalies],
        }


def _scales(rng: np.random.Generator, spec: ChallengeSpec) -> Tuple[float, float]:
    low, high = spec.scale_range
    x_scale, y_scale = rng.uniform(low, high, size=2)
    return float(x_scale), float(y_scale)


def _scaled_row(
    rng: np.random.Generator, spec: ChallengeSpec, shape: int
) -> Tuple[np.ndarray, float, float]:
    x_scale, y_scale = _scales(rng, spec)
    row = sample_base(shape, spec.n_f, x_scale, y_scale)
    return row, x_scale, y_scale


def _add_noise(rng: np.random.Generator, spec: ChallengeSpec, row: np.ndarray):
    return row + spec.noise_sigma * rng.standard_normal(spec.n_f)


def _generate_c1(spec: ChallengeSpec, rng: np.random.Generator):
    rows: List[np.ndarray] = []
    records: List[AnomalyRecord] = []
    for _ in range(spec.n_inliers):
        row, _, _ = _scaled_row(rng, spec, spec.shape)
        rows.append(_add_noise(rng, spec, row))

    a_low, a_high = spec.amplitude_range
    w_low, w_high = spec.width_range
    for _ in range(spec.n_anomalies):
        row, x_scale, y_scale = _scaled_row(rng, spec, spec.shape)
        amplitude = float(rng.uniform(a_low, a_high))
        width = float(rng.uniform(w_low, w_high))
        center = float(rng.uniform(0.0, 1.0))
        row = row + gaussian_bump(spec.n_f, amplitude, width, center)
        records.append(
            AnomalyRecord(
                row=len(rows),
                shape=spec.shape,
                x_scale=x_scale,
                y_scale=y_scale,
                amplitude=amplitude,
                width=width,
                center=center,
            )
        )
        rows.append(_add_noise(rng, spec, row))
    return rows, records, spec.n_inliers


def _generate_c2(spec: ChallengeSpec, rng: np.random.Generator):
    rows: List[np.ndarray] = []
    records: List[AnomalyRecord] = []
    inlier_shapes = [k for k in range(ShapeLibrary.size()) if k != spec.anomaly_class]
    for shape in inlier_shapes:
        for _ in range(spec.n_inliers):
            row, _, _ = _scaled_row(rng, spec, shape)
            rows.append(_add_noise(rng, spec, row))
    n_inliers = len(rows)

    for _ in range(spec.n_anomalies):
        row, x_scale, y_scale = _scaled_row(rng, spec, spec.anomaly_class)
        records.append(
            AnomalyRecord(
                row=len(rows),
                shape=spec.anomaly_class,
                x_scale=x_scale,
                y_scale=y_scale,
            )
        )
        rows.append(_add_noise(rng, spec, row))
    return rows, records, n_inliers


def dataset_name(spec: ChallengeSpec) -> str:
    k = spec.shape if spec.is_c1 else spec.anomaly_class
    return f"{spec.challenge}-k{k}-seed{spec.seed}"


def generate(spec: ChallengeSpec) -> GeneratedDataset:
    """按参数生成数据集，给定 spec 完全确定"""
    rng = np.random.default_rng(spec.seed)
    if spec.is_c1:
        rows, records, n_inliers = _generate_c1(spec, rng)
    else:
        rows, records, n_inliers = _generate_c2(spec, rng)

    flags = np.zeros(len(rows), dtype=bool)
    flags[n_inliers:] = True
    dataset = Dataset(
        data=DataMatrix(np.vstack(rows)),
        labels=LabelVector(flags),
        name=dataset_name(spec),
    )
    logger.debug(
        f"生成 {dataset.name}: {dataset.data.n_d}×{dataset.data.n_f}，"
        f"异常 {dataset.n_outliers} 个"
    )
    return GeneratedDataset(dataset=dataset, spec=spec, anomalies=records)


def generate_c1(
    n_f: int,
    shape: int,
    seed: int,
    n_inliers: int = 1000,
    n_anomalies: int = 50,
    noise_sigma: float = 0.3,
) -> Dataset:
    """C-I：n_inliers 个 inlier + n_anomalies 个带高斯峰的异常"""
    challenge = "c1a" if n_f <= 100 else "c1b"
    spec = ChallengeSpec(
        challenge=challenge,
        n_f=n_f,
        n_inliers=n_inliers,
        n_anomalies=n_anomalies,
        noise_sigma=noise_sigma,
        seed=seed,
        shape=shape,
    )
    return generate(spec).dataset


def generate_c2(
    n_f: int,
    anomaly_class: int,
    seed: int,
    n_inliers: int = 500,
    n_anomalies: int = 50,
    noise_sigma: float = 0.8,
) -> Dataset:
    """C-II：其余 9 个形状各 n_inliers 个 inlier + 异常类 n_anomalies 个"""
    challenge = "c2a" if n_f <= 100 else "c2b"
    spec = ChallengeSpec(
        challenge=challenge,
        n_f=n_f,
        n_inliers=n_inliers,
        n_anomalies=n_anomalies,
        noise_sigma=noise_sigma,
        seed=seed,
        anomaly_class=anomaly_class,
    )
    return generate(spec).dataset


def generate_c2_family(n_f: int, seed: int, **overrides) -> List[Dataset]:
    """依次以 10 个类为异常类生成 10 个数据集"""
    return [
        generate_c2(n_f, k, seed, **overrides) for k in range(ShapeLibrary.size())
    ]
