from __future__ import annotations

from dataclasses import asdict, dataclass, field

from ..errors import InvalidInputError

EXPERIMENTS = (
    "xn-clt",
    "yn-variance",
    "zn-clt",
    "decomposition",
    "zeta-ratio",
    "berry-esseen",
    "moment-scaling",
    "moments-dump",
)
# experiments whose rows are distributional summaries of replicated draws
DISTRIBUTIONAL = {"xn-clt", "yn-variance", "zn-clt", "decomposition", "berry-esseen", "moment-scaling", "zeta-ratio"}

DEFAULT_SEED = 1729


class InvalidConfigError(InvalidInputError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    n: int = 2
    N_grid: tuple[int, ...] = (50, 100, 200)
    replications: int = 2000
    master_seed: int = DEFAULT_SEED
    threads: int = 1
    output_path: str | None = None
    output_format: str = "json"
    emit_qq: bool = False
    kernel: str | None = None
    p: int = 4
    zeta_outer: int = 2000
    zeta_inner: int = 2000
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "N_grid", tuple(int(v) for v in self.N_grid))
        self.validate()

    def validate(self):
        if self.experiment not in EXPERIMENTS:
            raise InvalidConfigError(
                f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}"
            )
        if self.n < 1:
            raise InvalidConfigError("n must be >= 1")
        if not 0 <= self.master_seed < 2**64:
            raise InvalidConfigError("seed must be an unsigned 64-bit integer")
        if self.threads < 1:
            raise InvalidConfigError("threads must be >= 1")
        if self.output_format not in ("json", "csv"):
            raise InvalidConfigError("format must be json or csv")
        if self.experiment == "moments-dump":
            return
        if not self.N_grid:
            raise InvalidConfigError("N grid is empty")
        if any(b <= a for a, b in zip(self.N_grid, self.N_grid[1:])):
            raise InvalidConfigError(f"N grid must be strictly increasing: {self.N_grid}")
        if self.N_grid[0] < self.n:
            raise InvalidConfigError(f"every N must be >= n={self.n}")
        if self.experiment in DISTRIBUTIONAL and self.replications < 100:
            raise InvalidConfigError("distributional experiments need >= 100 samples")
        if self.experiment == "moment-scaling" and self.p not in (2, 4):
            raise InvalidConfigError("moment-scaling supports p in {2, 4}")
        if self.zeta_outer < 100 or self.zeta_inner < 100:
            raise InvalidConfigError("zeta estimation needs outer, inner >= 100")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["N_grid"] = list(self.N_grid)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        return cls(**d)
