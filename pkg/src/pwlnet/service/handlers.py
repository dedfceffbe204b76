"""Request handlers shared by the HTTP app and the in-process CLI client.

Each handler is a pure request-model -> response-model function; the
FastAPI layer only maps exceptions onto status codes, and the CLI calls
these directly when no server address is given.
"""

from __future__ import annotations

import os

from .. import __version__
from ..errors import EmptyRegionError
from ..experiments import (
    ExperimentMode,
    ExperimentPlan,
    classes_csv,
    plot_script,
    run_experiment,
    violators_csv,
)
from ..lattice import audit, repair_split
from ..network import GeneratorConfig, generate, serialize_network
from ..rationals import format_decimal, format_rational, parse_rational
from ..regional import (
    RegionalRepresentation,
    evaluate_regional,
    from_document,
    to_document,
)
from ..translator import TranslationOptions, translate
from . import schemas


def _regional_to_payload(rep: RegionalRepresentation) -> schemas.RegionalPayload:
    return schemas.RegionalPayload.model_validate(to_document(rep))


def _regional_from_payload(payload: schemas.RegionalPayload) -> RegionalRepresentation:
    return from_document(payload.model_dump())


def handle_translate(req: schemas.TranslateRequest) -> schemas.TranslateResponse:
    net = req.network.to_core()
    options = TranslationOptions(
        prune_empty=req.prune_empty,
        classify_hyperplanes=req.classify_hyperplanes,
        parallel=req.parallel,
    )
    rep = translate(net, options)
    return schemas.TranslateResponse(
        regional=_regional_to_payload(rep),
        pair_counts=rep.pair_counts(),
        nonempty_counts=rep.nonempty_counts(),
    )


def handle_eval_network(req: schemas.EvalNetworkRequest) -> schemas.EvalNetworkResponse:
    net = req.network.to_core()
    point = tuple(parse_rational(tok) for tok in req.point)
    trace = net.forward_trace(point)
    return schemas.EvalNetworkResponse(
        outputs=[format_rational(v) for v in trace[-1]],
        layers=[[format_rational(v) for v in layer] for layer in trace],
    )


def handle_eval_regional(req: schemas.EvalRegionalRequest) -> schemas.EvalRegionalResponse:
    rep = _regional_from_payload(req.regional)
    point = tuple(parse_rational(tok) for tok in req.point)
    values = evaluate_regional(rep, point)
    return schemas.EvalRegionalResponse(outputs=[format_rational(v) for v in values])


def handle_generate(req: schemas.GenerateRequest) -> schemas.GenerateResponse:
    cfg = GeneratorConfig(
        inputs=req.inputs,
        hidden_layers=req.hidden_layers,
        hidden_width=req.hidden_width,
        outputs=req.outputs,
        seed=req.seed,
        grid=req.grid,
    )
    net = generate(cfg)
    return schemas.GenerateResponse(
        network=schemas.NetworkPayload.from_core(net),
        text=serialize_network(net),
    )


def handle_stats(req: schemas.StatsRequest) -> schemas.StatsResponse:
    rep = _regional_from_payload(req.regional)
    return schemas.StatsResponse(
        input_dim=rep.input_dim,
        output_count=rep.output_count,
        pair_counts=rep.pair_counts(),
        nonempty_counts=rep.nonempty_counts(),
    )


def handle_lattice_check(req: schemas.LatticeCheckRequest) -> schemas.LatticeCheckResponse:
    rep = _regional_from_payload(req.regional)
    audits = []
    repair_reports = []
    repaired_outputs = []
    for pairs in rep.outputs:
        live = tuple(p for p in pairs if not p.region_empty)
        if not live:
            raise EmptyRegionError("an output has no nonempty pairs to audit")
        if req.repair:
            repaired, report = repair_split(live, max_iterations=req.max_iterations)
            repair_reports.append(
                schemas.RepairReportPayload(
                    iterations=report.iterations,
                    final_violation_count=report.final_violation_count,
                    stalled=report.stalled,
                )
            )
            repaired_outputs.append(repaired)
            live = repaired
        result = audit(live)
        audits.append(
            schemas.AuditPayload(
                region_count=result.size,
                violation_count=result.violation_count,
                violating_pairs=[list(p) for p in result.violating_pairs],
                violating_pairs_unordered=result.unordered_violation_count,
                satisfies_lattice_property=result.satisfies_lattice_property,
                above_matrix=(
                    [list(row) for row in result.above_matrix]
                    if req.include_matrix
                    else None
                ),
                k_sets=(
                    [list(ks) for ks in result.k_sets()]
                    if result.satisfies_lattice_property
                    else None
                ),
            )
        )
    repaired_payload = None
    if req.repair:
        repaired_rep = RegionalRepresentation(
            rep.input_dim,
            tuple(repaired_outputs),
            rep.prune_empty,
            rep.classify_hyperplanes,
        )
        repaired_payload = _regional_to_payload(repaired_rep)
    return schemas.LatticeCheckResponse(
        outputs=audits,
        repair_reports=repair_reports if req.repair else None,
        repaired=repaired_payload,
    )


def handle_experiment(req: schemas.ExperimentRequest) -> schemas.ExperimentResponse:
    plan = ExperimentPlan(
        mode=ExperimentMode(req.mode),
        fixed=req.fixed,
        classes=req.classes,
        per_class=req.per_class,
        seed=req.seed,
        grid=req.grid,
    )
    workers = max(1, min(req.workers, os.cpu_count() or 1))
    stats = run_experiment(plan, workers=workers)
    return schemas.ExperimentResponse(
        classes=[
            schemas.ClassStatsPayload(
                mode=cs.mode.value,
                fixed=cs.fixed,
                class_value=cs.value,
                region_counts=list(cs.region_counts),
                avg_regions=format_decimal(cs.average),
                max_regions=cs.maximum,
                min_regions=cs.minimum,
                violators=[
                    schemas.ViolatorPayload(
                        index=v.index,
                        seed=v.seed,
                        regions=v.region_count,
                        violating_pairs=v.violating_pairs,
                        violating_pairs_unordered=v.violating_pairs_unordered,
                    )
                    for v in cs.violators
                ],
            )
            for cs in stats
        ],
        classes_csv=classes_csv(stats),
        violators_csv=violators_csv(stats),
        plot_script=plot_script(stats),
    )


def handle_health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


# path -> (request model, response model, handler); the app and the CLI's
# local dispatch are both generated from this table.
ROUTES = {
    "/translate": (schemas.TranslateRequest, schemas.TranslateResponse, handle_translate),
    "/network/eval": (
        schemas.EvalNetworkRequest,
        schemas.EvalNetworkResponse,
        handle_eval_network,
    ),
    "/network/generate": (
        schemas.GenerateRequest,
        schemas.GenerateResponse,
        handle_generate,
    ),
    "/regional/eval": (
        schemas.EvalRegionalRequest,
        schemas.EvalRegionalResponse,
        handle_eval_regional,
    ),
    "/regional/stats": (schemas.StatsRequest, schemas.StatsResponse, handle_stats),
    "/lattice/check": (
        schemas.LatticeCheckRequest,
        schemas.LatticeCheckResponse,
        handle_lattice_check,
    ),
    "/experiment": (
        schemas.ExperimentRequest,
        schemas.ExperimentResponse,
        handle_experiment,
    ),
}
