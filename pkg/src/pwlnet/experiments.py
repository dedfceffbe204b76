"""Population studies: region counts and dominance violations by model size.

A plan fixes one size knob and sweeps the other: in "layers" mode the
width equals the input count and stays fixed while the number of hidden
layers walks 1..classes; in "width" mode the hidden layer count is fixed
and the input count / layer width walk together. Every class holds
`per_class` generated networks; each is compiled with both accelerations
on, its nonempty pair count for the first output recorded, and its
encoding audited for the min/max property.

Per-network seeds are derived by hashing (plan seed, mode, fixed, class,
index), so any class or single network can be regenerated independently
and runs are reproducible byte for byte, including the emitted CSV.
"""

from __future__ import annotations

import csv
import enum
import hashlib
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import DomainError
from .lattice import audit
from .network import GeneratorConfig, generate
from .rationals import format_decimal
from .translator import TranslationOptions, translate

CLASSES_CSV = "classes.csv"
VIOLATORS_CSV = "violators.csv"
PLOT_SCRIPT = "plot_regions.py"

CLASSES_COLUMNS = [
    "mode",
    "fixed",
    "class_value",
    "networks",
    "avg_regions",
    "max_regions",
    "min_regions",
    "violators",
]
VIOLATORS_COLUMNS = [
    "mode",
    "fixed",
    "class_value",
    "network_index",
    "network_seed",
    "regions",
    "violating_pairs",
    "violating_pairs_unordered",
]


class ExperimentMode(enum.Enum):
    LAYERS = "layers"
    WIDTH = "width"


@dataclass(frozen=True)
class ExperimentPlan:
    mode: ExperimentMode
    fixed: int
    classes: int
    per_class: int
    seed: int
    grid: int = 2**16

    def __post_init__(self) -> None:
        if min(self.fixed, self.classes, self.per_class) < 1:
            raise DomainError("plan counts must be at least 1")
        if self.grid < 2:
            raise DomainError("generator grid must be at least 2")

    def class_values(self) -> range:
        return range(1, self.classes + 1)


def derive_seed(plan_seed: int, mode: str, fixed: int, value: int, index: int) -> int:
    digest = hashlib.sha256(
        f"{plan_seed}:{mode}:{fixed}:{value}:{index}".encode()
    ).digest()
    return int.from_bytes(digest[:8], "big")


def network_config(plan: ExperimentPlan, value: int, index: int) -> GeneratorConfig:
    seed = derive_seed(plan.seed, plan.mode.value, plan.fixed, value, index)
    if plan.mode is ExperimentMode.LAYERS:
        inputs, width, layers = plan.fixed, plan.fixed, value
    else:
        inputs, width, layers = value, value, plan.fixed
    return GeneratorConfig(
        inputs=inputs,
        hidden_layers=layers,
        hidden_width=width,
        outputs=1,
        seed=seed,
        grid=plan.grid,
    )


@dataclass(frozen=True)
class NetworkResult:
    index: int
    seed: int
    region_count: int
    violating_pairs: int
    violating_pairs_unordered: int

    @property
    def violates(self) -> bool:
        return self.violating_pairs > 0


@dataclass(frozen=True)
class ClassStats:
    mode: ExperimentMode
    fixed: int
    value: int
    results: tuple[NetworkResult, ...]

    @property
    def region_counts(self) -> tuple[int, ...]:
        return tuple(r.region_count for r in self.results)

    @property
    def average(self) -> Fraction:
        counts = self.region_counts
        return Fraction(sum(counts), len(counts))

    @property
    def maximum(self) -> int:
        return max(self.region_counts)

    @property
    def minimum(self) -> int:
        return min(self.region_counts)

    @property
    def violators(self) -> tuple[NetworkResult, ...]:
        return tuple(r for r in self.results if r.violates)


def _run_network(plan: ExperimentPlan, value: int, index: int) -> NetworkResult:
    cfg = network_config(plan, value, index)
    net = generate(cfg)
    rep = translate(net, TranslationOptions())
    pairs = rep.outputs[0]
    audit_result = audit(pairs)
    return NetworkResult(
        index=index,
        seed=cfg.seed,
        region_count=len(pairs),
        violating_pairs=audit_result.violation_count,
        violating_pairs_unordered=audit_result.unordered_violation_count,
    )


def _job(args: tuple[ExperimentPlan, int, int]) -> tuple[int, int, NetworkResult]:
    plan, value, index = args
    return value, index, _run_network(plan, value, index)


def run_experiment(plan: ExperimentPlan, workers: int = 1) -> list[ClassStats]:
    """All class statistics for the plan; deterministic for a fixed plan."""
    jobs = [
        (plan, value, index)
        for value in plan.class_values()
        for index in range(plan.per_class)
    ]
    results: dict[tuple[int, int], NetworkResult] = {}
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for value, index, res in pool.map(_job, jobs):
                results[(value, index)] = res
    else:
        for args in jobs:
            value, index, res = _job(args)
            results[(value, index)] = res
    stats = []
    for value in plan.class_values():
        ordered = tuple(results[(value, i)] for i in range(plan.per_class))
        stats.append(ClassStats(plan.mode, plan.fixed, value, ordered))
    return stats


def classes_csv(stats: list[ClassStats]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CLASSES_COLUMNS)
    for cs in stats:
        writer.writerow(
            [
                cs.mode.value,
                cs.fixed,
                cs.value,
                len(cs.results),
                format_decimal(cs.average),
                cs.maximum,
                cs.minimum,
                len(cs.violators),
            ]
        )
    return buf.getvalue()


def violators_csv(stats: list[ClassStats]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(VIOLATORS_COLUMNS)
    for cs in stats:
        for res in cs.violators:
            writer.writerow(
                [
                    cs.mode.value,
                    cs.fixed,
                    cs.value,
                    res.index,
                    res.seed,
                    res.region_count,
                    res.violating_pairs,
                    res.violating_pairs_unordered,
                ]
            )
    return buf.getvalue()


def plot_script(stats: list[ClassStats]) -> str:
    """A standalone script that draws average regions per class parameter.

    One curve per (mode, fixed) group found in the stats; the script reads
    the CSV next to it, so regenerated data replots without editing.
    """
    groups = []
    for cs in stats:
        key = (cs.mode.value, cs.fixed)
        if key not in groups:
            groups.append(key)
    lines = [
        "#!/usr/bin/env python3",
        '"""Plot average region counts per class from classes.csv."""',
        "",
        "import csv",
        "from pathlib import Path",
        "",
        "import matplotlib.pyplot as plt",
        "",
        f"rows = list(csv.DictReader(open(Path(__file__).parent / '{CLASSES_CSV}')))",
        "fig, ax = plt.subplots()",
    ]
    for mode, fixed in groups:
        label = f"{mode}, fixed={fixed}"
        lines += [
            "",
            f"# curve: mode={mode} fixed={fixed}",
            f"block = [r for r in rows if r['mode'] == '{mode}' and r['fixed'] == '{fixed}']",
            "ax.plot([int(r['class_value']) for r in block],",
            "        [float(r['avg_regions']) for r in block],",
            f"        marker='o', label='{label}')",
        ]
    lines += [
        "",
        "ax.set_xlabel('class parameter')",
        "ax.set_ylabel('average regions')",
        "ax.legend()",
        "fig.savefig(Path(__file__).parent / 'regions.png', dpi=150)",
        "print('wrote regions.png')",
        "",
    ]
    return "\n".join(lines)


def emit_report(stats: list[ClassStats], out_dir: str | Path) -> dict[str, Path]:
    """Write classes.csv, violators.csv and the plot script into out_dir."""
    if not stats:
        raise DomainError("no class statistics to report")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "classes_csv": out / CLASSES_CSV,
        "violators_csv": out / VIOLATORS_CSV,
        "plot_script": out / PLOT_SCRIPT,
    }
    paths["classes_csv"].write_text(classes_csv(stats))
    paths["violators_csv"].write_text(violators_csv(stats))
    paths["plot_script"].write_text(plot_script(stats))
    return paths
