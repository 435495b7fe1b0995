"""The verification service: one endpoint per pipeline stage.

Input problems (malformed graphs, unknown relation names, bad word
entries) surface as HTTP 400 with the core error message.  Hypothesis
failures and failed checks are legitimate outcomes, reported with
status "hypothesis_rejected" / "check_failed" in a 200 response.
"""

from fastapi import FastAPI, HTTPException

from .. import fiber, homology, invariants, symplectic
from ..graph import (GraphFormatError, HypothesisError, PlumbingGraph,
                     definiteness_conditions, validate)
from . import schemas

app = FastAPI(
    title="plumbook",
    description="Compile decorated plumbing graphs into open book / "
                "Lefschetz data and certify the symplectic local models.",
    version="0.1.0",
)


def _parse_graph(doc):
    try:
        return PlumbingGraph.from_dict(doc)
    except GraphFormatError as exc:
        raise HTTPException(status_code=400, detail=str(exc))


@app.post("/validate", response_model=schemas.ValidateResponse)
def validate_graph(request: schemas.ValidateRequest):
    graph = _parse_graph(request.graph)
    report = validate(graph)
    conditions = None
    if report.degree_ok:
        c1, c2, c3, c4 = definiteness_conditions(graph)
        conditions = {"positive_solve_all_b": c1,
                      "positive_solve_some_b": c2,
                      "strict_vertex": c3,
                      "negative_definite": c4,
                      "note": "first condition certified through the "
                              "equivalence, spot-checked on a basket of b"}
    return schemas.ValidateResponse(
        status="ok" if report.accepted else "hypothesis_rejected",
        report=report.to_dict(),
        lemma_conditions=conditions,
    )


@app.post("/compile", response_model=schemas.CompileResponse)
def compile_graph(request: schemas.CompileRequest):
    graph = _parse_graph(request.graph)
    report = validate(graph)
    if not report.accepted and not request.force:
        return schemas.CompileResponse(status="hypothesis_rejected",
                                       openbook=None,
                                       hypothesis_violation=True)
    doc = fiber.open_book_to_dict(graph, force=request.force)
    if not report.accepted:
        doc = dict(doc, hypothesis_violation=True)
    return schemas.CompileResponse(status="ok", openbook=doc,
                                   hypothesis_violation=not report.accepted)


@app.post("/areas", response_model=schemas.AreasResponse)
def areas(request: schemas.AreasRequest):
    graph = _parse_graph(request.graph)
    b = request.b_over_pi
    if b is None:
        b = [1] * graph.n
    try:
        from fractions import Fraction
        b = [Fraction(str(x)) for x in b]
    except (ValueError, ZeroDivisionError) as exc:
        raise HTTPException(status_code=400,
                            detail="bad area value: %s" % exc)
    if len(b) != graph.n or any(x <= 0 for x in b):
        raise HTTPException(
            status_code=400,
            detail="need one positive area per vertex (%d)" % graph.n)
    try:
        assignment = symplectic.solve_area_system(graph, b)
    except HypothesisError as exc:
        return schemas.AreasResponse(status="hypothesis_rejected",
                                     assignment=None, detail=str(exc))
    return schemas.AreasResponse(status="ok",
                                 assignment=assignment.to_dict())


_CHECK_NAMES = ("liouville", "gluing", "intertwine", "fibration")


@app.post("/verify-models", response_model=schemas.VerifyModelsResponse)
def verify_models(request: schemas.VerifyModelsRequest):
    try:
        model = symplectic.DiskBundleModel.from_dict(request.constants)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    wanted = set(request.checks)
    if "all" in wanted:
        wanted = set(_CHECK_NAMES)
    unknown = wanted - set(_CHECK_NAMES)
    if unknown:
        raise HTTPException(status_code=400,
                            detail="unknown checks: %s" % sorted(unknown))
    reports = []
    if "liouville" in wanted:
        for chart in ("Z1", "W0"):
            reports.append(symplectic.check_liouville(
                model, chart=chart, samples=request.samples, h=request.h,
                tolerance=request.tolerance, seed=request.seed))
        for i in range(1, model.m + 1):
            reports.append(symplectic.check_liouville(
                model, chart="Wi", i=i, samples=request.samples, h=request.h,
                tolerance=request.tolerance, seed=request.seed))
    if "gluing" in wanted:
        reports.append(symplectic.check_symplectomorphism(
            model, samples=request.samples, seed=request.seed))
    if "intertwine" in wanted:
        reports.append(symplectic.check_intertwine(
            model, samples=request.samples, seed=request.seed))
    if "fibration" in wanted:
        reports.extend(symplectic.check_fibration(
            model, samples=max(1, request.samples // 2), seed=request.seed))
    status = "ok" if all(r.passed for r in reports) else "check_failed"
    return schemas.VerifyModelsResponse(
        status=status, reports=[r.to_dict() for r in reports])


@app.post("/homology-check", response_model=schemas.HomologyCheckResponse)
def homology_check(request: schemas.HomologyCheckRequest):
    try:
        graph, data = fiber.parse_interchange(request.openbook)
    except fiber.InterchangeError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    model = homology.homology_basis(data.fiber)
    try:
        word1 = homology.word_from_entries(model, request.word1)
        word2 = homology.word_from_entries(model, request.word2)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    action1 = homology.word_action(model, word1)
    action2 = homology.word_action(model, word2)
    equal = action1 == action2
    return schemas.HomologyCheckResponse(
        status="ok" if equal else "check_failed",
        equal=equal, action1=action1, action2=action2)


@app.post("/substitute", response_model=schemas.SubstituteResponse)
def substitute(request: schemas.SubstituteRequest):
    graph = _parse_graph(request.graph)
    if (request.relation_name is None) == (request.relation is None):
        raise HTTPException(status_code=400,
                            detail="give exactly one of relation_name / relation")
    try:
        if request.relation_name is not None:
            relation = invariants.find_relation(request.relation_name)
        else:
            relation = invariants.load_relation(request.relation)
    except (KeyError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    try:
        report = invariants.substitute(graph, relation)
    except (invariants.PageMismatch, invariants.TauMismatch) as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    except HypothesisError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    status = "ok" if report.homology_equal else "check_failed"
    return schemas.SubstituteResponse(status=status, report=report.to_dict())


@app.post("/invariants", response_model=schemas.InvariantsResponse)
def graph_invariants(request: schemas.InvariantsRequest):
    graph = _parse_graph(request.graph)
    try:
        boundary = invariants.boundary_homology(graph)
        page = fiber.build_fiber(graph)
        k = len(fiber.neck_curves(graph))
    except HypothesisError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    euler = {
        "chi_fiber": fiber.chi_fiber(page),
        "twist_count": k,
        "chi_plumbing": fiber.chi_plumbing(graph),
        "identity_holds": fiber.chi_total_check(graph),
    }
    return schemas.InvariantsResponse(
        status="ok", boundary_homology=boundary.to_dict(), euler=euler,
        sigma_plumbing=-graph.n)


@app.get("/relations", response_model=schemas.RelationListResponse)
def relations():
    return schemas.RelationListResponse(
        relations=[r.to_dict() for r in invariants.relation_library()])
