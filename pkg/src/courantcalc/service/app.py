"""FastAPI service wrapping the exact-arithmetic core.

All endpoints are stateless: a request carries the full problem (structure
plus operands) and the response carries the full answer.  Malformed input
is a 400/422; a mathematical check that fails is a normal 200 response with
``ok: false`` and a witness.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import presets
from ..charclasses import (
    CharClassError,
    ConnectionPath,
    chern,
    chern_simons,
    intrinsic_modular,
    secondary_class,
    straight_path,
    unimodularity_certificate,
)
from ..cochains import Cochain, CochainError, from_function
from ..cohomology import certify_closed, certify_exact, cohomology_point
from ..connections import (
    Connection,
    ConnectionError,
    covariant_derivative_end,
    curvature,
)
from ..courant import CourantStructure, StructureError
from ..dirac import DiracError, check_dirac, dirac_subbundle, restrict
from ..graded import GradedElem, GradedError
from ..linalg import LinAlgError, Mat
from ..poly import PolyError
from ..selftest import run_selftest
from . import models

INPUT_ERRORS = (StructureError, PolyError, GradedError, CochainError,
                ConnectionError, CharClassError, DiracError, LinAlgError,
                ValueError, KeyError)


def _structure(spec) -> CourantStructure:
    try:
        return presets.structure_from_json(spec)
    except INPUT_ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


def _cochain(E: CourantStructure, text: str) -> Cochain:
    try:
        return Cochain(E, GradedElem.parse(E.ctx, text))
    except INPUT_ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


def _connection(E: CourantStructure, spec: models.ConnectionSpec) -> Connection:
    try:
        pairing = Mat(spec.fiber_pairing) if spec.fiber_pairing else None
        return Connection(E, spec.m, spec.gamma, fiber_pairing=pairing)
    except INPUT_ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


def create_app() -> FastAPI:
    app = FastAPI(
        title="courantcalc",
        description="Exact symbolic calculus for Courant algebroids",
        version="0.1.0",
    )

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.get("/v1/presets", response_model=models.PresetList)
    def preset_list():
        return models.PresetList(presets=sorted(presets.PRESETS))

    @app.get("/v1/presets/{name}")
    def preset_detail(name: str):
        if name not in presets.PRESETS:
            raise HTTPException(status_code=404, detail=f"unknown preset {name!r}")
        return presets.structure_to_json(presets.PRESETS[name]())

    @app.post("/v1/check-axioms", response_model=models.CheckAxiomsResponse)
    def check_axioms(req: models.CheckAxiomsRequest):
        E = _structure(req.structure)
        report = E.check_axioms(seed=req.seed, samples=req.samples)
        return models.CheckAxiomsResponse(**report.to_json())

    @app.post("/v1/bracket", response_model=models.SectionResponse)
    def bracket(req: models.BracketRequest):
        E = _structure(req.structure)
        try:
            a, b = E.section(req.a), E.section(req.b)
        except INPUT_ERRORS as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return models.SectionResponse(section=E.bracket(a, b).to_json())

    @app.post("/v1/d", response_model=models.CochainResponse)
    def differential(req: models.DifferentialRequest):
        E = _structure(req.structure)
        omega = _cochain(E, req.cochain).d()
        return models.CochainResponse(cochain=str(omega), degree=omega.degree)

    @app.post("/v1/cup", response_model=models.CochainResponse)
    def cup(req: models.CupRequest):
        E = _structure(req.structure)
        out = _cochain(E, req.omega).cup(_cochain(E, req.tau))
        return models.CochainResponse(cochain=str(out), degree=out.degree)

    @app.post("/v1/evaluate", response_model=models.ValueResponse)
    def evaluate(req: models.EvaluateRequest):
        E = _structure(req.structure)
        omega = _cochain(E, req.cochain)
        try:
            sections = [E.section(s) for s in req.sections]
            value = omega.evaluate(*sections)
        except INPUT_ERRORS as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return models.ValueResponse(value=str(value))

    @app.post("/v1/symbol", response_model=models.VectorFieldResponse)
    def symbol(req: models.SymbolRequest):
        E = _structure(req.structure)
        omega = _cochain(E, req.cochain)
        try:
            sections = [E.section(s) for s in req.sections]
            sigma = omega.symbol(*sections)
        except INPUT_ERRORS as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return models.VectorFieldResponse(vector_field=sigma.to_json())

    @app.post("/v1/curvature", response_model=models.CurvatureResponse)
    def curvature_endpoint(req: models.ConnectionRequest):
        E = _structure(req.structure)
        conn = _connection(E, req.connection)
        F = curvature(conn)
        return models.CurvatureResponse(
            entries=[[str(c) for c in row] for row in F.entries])

    @app.post("/v1/bianchi", response_model=models.BianchiResponse)
    def bianchi(req: models.ConnectionRequest):
        E = _structure(req.structure)
        conn = _connection(E, req.connection)
        defect = covariant_derivative_end(conn, curvature(conn))
        return models.BianchiResponse(ok=defect.is_zero)

    @app.post("/v1/modular", response_model=models.ModularResponse)
    def modular(req: models.StructureRequest):
        E = _structure(req.structure)
        mc = intrinsic_modular(E)
        return models.ModularResponse(xi=str(mc.xi), closed=certify_closed(mc.xi))

    @app.post("/v1/unimodular", response_model=models.UnimodularResponse)
    def unimodular(req: models.UnimodularRequest):
        E = _structure(req.structure)
        cert = unimodularity_certificate(E, bound=req.bound)
        payload = cert.to_json()
        return models.UnimodularResponse(ok=cert.decided, **payload)

    @app.post("/v1/chern", response_model=models.ChernResponse)
    def chern_endpoint(req: models.ChernRequest):
        E = _structure(req.structure)
        conn = _connection(E, req.connection)
        form = chern(conn, req.k)
        return models.ChernResponse(cochain=str(form), degree=2 * req.k,
                                    closed=certify_closed(form))

    @app.post("/v1/chern-simons", response_model=models.ChernSimonsResponse)
    def chern_simons_endpoint(req: models.ChernSimonsRequest):
        E = _structure(req.structure)
        if req.path is not None:
            try:
                pairing = Mat(req.path.fiber_pairing) if req.path.fiber_pairing else None
                path = ConnectionPath(E, req.path.m, req.path.gamma_t,
                                      fiber_pairing=pairing)
            except INPUT_ERRORS as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from exc
        elif req.conn0 is not None and req.conn1 is not None:
            path = straight_path(_connection(E, req.conn0), _connection(E, req.conn1))
        else:
            raise HTTPException(status_code=400,
                                detail="need either a path or both endpoints")
        form = chern_simons(path, req.k)
        lhs = form.d()
        rhs = chern(path.at(1), req.k) - chern(path.at(0), req.k)
        return models.ChernSimonsResponse(
            cochain=str(form), degree=2 * req.k - 1, transgression_ok=lhs == rhs)

    @app.post("/v1/secondary", response_model=models.CochainResponse)
    def secondary(req: models.SecondaryRequest):
        E = _structure(req.structure)
        try:
            rep = secondary_class(E, req.linear, Mat(req.metric), req.k)
        except INPUT_ERRORS as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return models.CochainResponse(cochain=str(rep), degree=4 * req.k - 3)

    @app.post("/v1/cohomology", response_model=models.CohomologyResponse)
    def cohomology(req: models.CohomologyRequest):
        E = _structure(req.structure)
        if req.cochain is None:
            try:
                result = cohomology_point(E, req.k)
            except StructureError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from exc
            return models.CohomologyResponse(
                k=req.k, dim=result.dimension,
                representatives=[str(c) for c in result.representatives])
        omega = _cochain(E, req.cochain)
        witness = certify_exact(omega, req.bound)
        return models.CohomologyResponse(
            k=omega.degree, closed=certify_closed(omega),
            exact_status="exact" if witness is not None else "undecided",
            witness=str(witness) if witness is not None else None)

    @app.post("/v1/dirac-check", response_model=models.DiracResponse)
    def dirac_check(req: models.DiracRequest):
        E = _structure(req.structure)
        try:
            report = check_dirac(E, req.frame.sections)
        except INPUT_ERRORS as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        payload = report.to_json()
        return models.DiracResponse(**payload)

    @app.post("/v1/restrict", response_model=models.RestrictResponse)
    def restrict_endpoint(req: models.RestrictRequest):
        E = _structure(req.structure)
        omega = _cochain(E, req.cochain)
        try:
            L = dirac_subbundle(E, req.frame.sections)
        except INPUT_ERRORS as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        form = restrict(omega, L)
        payload = form.to_json()
        return models.RestrictResponse(degree=payload["degree"],
                                       components=payload["components"])

    @app.post("/v1/selftest", response_model=models.SelfTestResponse)
    def selftest(req: models.SelfTestRequest):
        report = run_selftest(seed=req.seed)
        return models.SelfTestResponse(**report.to_json())

    return app


app = create_app()
