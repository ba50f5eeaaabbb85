"""
Evaluation Domain Schemas

실험 설정 파일 구조, 워커 작업(job), 요약, Formatter 입력을 정의합니다.
"""

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from chmcts.app.shared.types import (
    CalculatorInput,
    CalculatorOutput,
    FormatterInput,
    ProviderInput,
    ProviderOutput,
)
from chmcts.app.domain.geometry.models import PointSet, PruneMode
from chmcts.app.domain.momdp.models import Momdp
from chmcts.app.domain.momdp.schemas import ModelSourceRequest
from chmcts.app.domain.gdst.models import GdstConfig
from chmcts.app.domain.evaluation.models import (
    ExperimentKind,
    OfflineRun,
    RegretCurve,
    RegretEstimator,
    ScaleRow,
)


# ====================
# Experiment Config File
# ====================


class InstanceSpec(BaseModel):
    """GDST 인스턴스 지정 (실험 설정의 instance 항목)."""

    model_config = ConfigDict(extra="forbid")

    columns: int | None = Field(default=None, ge=1, description="열 수 c (scale 실험은 무시)")
    noise: float = Field(default=0.0, ge=0.0, le=1.0)
    seed: int = Field(default=0, ge=0)
    horizon: int | None = Field(default=None, ge=1, description="지평 H (기본 100·c)")

    def to_gdst(self, columns: int | None = None, noise: float | None = None) -> GdstConfig:
        resolved = self.columns if columns is None else columns
        if resolved is None:
            raise ValueError("instance.columns is required")
        return GdstConfig(
            columns=resolved,
            noise=self.noise if noise is None else noise,
            seed=self.seed,
            horizon=self.horizon,
        )


class ExperimentConfig(BaseModel):
    """
    실험 설정 파일

    regret / offline: instance, fixture, model 중 정확히 하나가 대상입니다.
    scale: columns 목록과 noises 목록으로 GDST 인스턴스를 만들고, instance의 seed / horizon을
    (있으면) 씁니다.
    """

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "experiment": "regret",
                "instance": {"columns": 7, "noise": 0.01, "seed": 0},
                "strategies": ["zooming", "hypervolume", "pareto-ucb"],
                "trials": 100000,
                "replications": 5,
                "estimator": "realized",
                "out_dir": "results/regret",
            }
        },
    )

    experiment: ExperimentKind
    instance: InstanceSpec | None = None
    fixture: str | None = None
    model: str | None = None
    strategies: list[str] = Field(default_factory=lambda: ["zooming"], min_length=1)
    trials: int | None = Field(default=None, ge=0)
    backup_budget: int | None = Field(default=None, ge=0)
    replications: int = Field(default=1, ge=1)
    estimator: RegretEstimator = RegretEstimator.REALIZED
    prune: PruneMode = PruneMode.CCS
    exploration: float | None = Field(default=None, ge=0.0)
    checkpoints: int | None = Field(default=None, gt=0, description="offline 체크포인트 수")
    columns: list[int] | None = Field(default=None, description="scale 실험의 열 수 목록")
    noises: list[float] = Field(default_factory=lambda: [0.0, 0.01])
    out_dir: str | None = None

    @field_validator("strategies")
    @classmethod
    def check_unique(cls, v: list[str]) -> list[str]:
        if len(set(v)) != len(v):
            raise ValueError("strategies must not repeat")
        return v

    @field_validator("noises")
    @classmethod
    def check_noises(cls, v: list[float]) -> list[float]:
        if not v or any(not 0.0 <= p <= 1.0 for p in v):
            raise ValueError("noises must be a nonempty list of probabilities")
        return v

    @model_validator(mode="after")
    def check_experiment(self) -> "ExperimentConfig":
        sources = [x for x in (self.instance, self.fixture, self.model) if x is not None]
        if self.experiment is ExperimentKind.SCALE:
            if not self.columns or any(c < 1 for c in self.columns):
                raise ValueError("scale experiments need a nonempty 'columns' list")
            if self.fixture is not None or self.model is not None:
                raise ValueError("scale experiments generate GDST instances; drop fixture/model")
        elif len(sources) != 1:
            raise ValueError("exactly one of instance, fixture or model must be given")
        elif self.instance is not None and self.instance.columns is None:
            raise ValueError("instance.columns is required")

        if self.experiment is ExperimentKind.REGRET and self.trials is None:
            raise ValueError("regret experiments need 'trials'")
        if self.experiment is not ExperimentKind.REGRET and self.backup_budget is None:
            raise ValueError(f"{self.experiment.value} experiments need 'backup_budget'")
        return self

    @property
    def source(self) -> ModelSourceRequest | None:
        """fixture / model 파일 출처 (instance면 None)."""
        if self.fixture is not None:
            return ModelSourceRequest(fixture=self.fixture)
        if self.model is not None:
            return ModelSourceRequest(path=self.model)
        return None


class ExperimentOverrides(BaseModel):
    """CLI 플래그로 덮어쓰는 설정값 (None은 설정 파일 값 유지)."""

    fixture: str | None = None
    model: str | None = None
    strategies: list[str] | None = None
    trials: int | None = None
    backup_budget: int | None = None
    replications: int | None = None
    estimator: RegretEstimator | None = None
    prune: PruneMode | None = None
    exploration: float | None = None
    columns: list[int] | None = None
    noises: list[float] | None = None
    out_dir: str | None = None

    def values(self) -> dict:
        data = self.model_dump(exclude_none=True)
        if any(key in data for key in ("instance", "fixture", "model")):
            # 대상은 통째로 바꿉니다
            for key in ("instance", "fixture", "model"):
                data.setdefault(key, None)
        return data


class ExperimentRequest(BaseModel):
    """bench-* 명령 요청"""

    experiment: ExperimentKind
    config_path: str | None = Field(default=None, description="실험 설정 JSON 경로")
    overrides: ExperimentOverrides = Field(default_factory=ExperimentOverrides)


# ====================
# Provider I/O
# ====================


class ConfigFileInput(ProviderInput):
    path: str


class ConfigFileOutput(ProviderOutput):
    document: dict
    source: str


# ====================
# Worker Jobs
# ====================


class RegretJob(CalculatorInput):
    model: Momdp
    true_ccs: PointSet
    strategy: str
    replication: int
    trials: int
    master_seed: int
    estimator: RegretEstimator = RegretEstimator.REALIZED
    prune: PruneMode = PruneMode.CCS
    exploration: float | None = None


class OfflineJob(CalculatorInput):
    model: Momdp
    strategy: str
    replication: int
    backup_budget: int
    master_seed: int
    checkpoints: int
    prune: PruneMode = PruneMode.CCS
    exploration: float | None = None


class ScaleJob(CalculatorInput):
    """워커에서 인스턴스를 다시 만듭니다 (생성은 설정에 대해 결정적)."""

    gdst: GdstConfig
    reference_hypervolume: float = Field(..., gt=0.0, description="hv(c, 0)")
    strategy: str
    replication: int
    backup_budget: int
    master_seed: int
    prune: PruneMode = PruneMode.CCS
    exploration: float | None = None


# ====================
# Summaries
# ====================


class RegretSummary(CalculatorOutput):
    strategy: str
    replications: int
    trials: int
    final_regret_mean: float
    final_regret_ci: tuple[float, float]
    mean_per_trial: float
    first_decile_mean: float
    last_decile_mean: float
    decile_ratio: float | None = Field(default=None, description="last / first (first가 0이면 None)")
    pareto_regret_mean: float


class OfflineSummary(CalculatorOutput):
    strategy: str
    replications: int
    final_backups_mean: float
    final_hypervolume_mean: float
    final_hypervolume_ci: tuple[float, float]


class ScaleSummary(CalculatorOutput):
    columns: int
    noise: float
    strategy: str
    replications: int
    ratio_mean: float
    ratio_ci: tuple[float, float]


class RegretSummaryInput(CalculatorInput):
    curves: list[RegretCurve]


class OfflineSummaryInput(CalculatorInput):
    runs: list[OfflineRun]


class ScaleSummaryInput(CalculatorInput):
    rows: list[ScaleRow]


class ChartSeries(BaseModel):
    """차트 시리즈 하나 (반복 실행 평균과 신뢰구간 띠)."""

    label: str
    x: list[float]
    y: list[float]
    lower: list[float] | None = None
    upper: list[float] | None = None


class RegretSummaryOutput(CalculatorOutput):
    summaries: list[RegretSummary]
    series: list[ChartSeries]


class OfflineSummaryOutput(CalculatorOutput):
    summaries: list[OfflineSummary]
    series: list[ChartSeries]


class ScaleSummaryOutput(CalculatorOutput):
    summaries: list[ScaleSummary]
    series: list[ChartSeries]


class ChartInput(FormatterInput):
    title: str
    x_label: str
    y_label: str
    series: list[ChartSeries]


class ExperimentResponse(BaseModel):
    experiment: ExperimentKind
    target: str
    out_dir: str
    files: dict[str, str] = Field(default_factory=dict)
    summaries: list[dict] = Field(default_factory=list)
    ground_truth: dict | None = None


class RegretTableInput(FormatterInput):
    curves: list[RegretCurve]


class OfflineTableInput(FormatterInput):
    runs: list[OfflineRun]


class ScaleTableInput(FormatterInput):
    rows: list[ScaleRow]


class SummaryDocumentInput(FormatterInput):
    response: ExperimentResponse
    config: ExperimentConfig
