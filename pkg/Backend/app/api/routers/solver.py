# app/api/routers/solver.py

from typing import Any

from fastapi import APIRouter, HTTPException, status

from app.api.schemas.qubo import Schedule
from app.api.schemas.solver import (
    SolveJsspRequest,
    SolveJsspResponse,
    SolveMaxCutRequest,
    SolveMaxCutResponse,
)
from app.services.qubo import cut_size, decode_schedule, encode_jssp, encode_maxcut
from app.services.solver import solve

router = APIRouter(
    prefix="/solver",
    tags=["Solver"],
    responses={404: {"description": "Not found"}},
)


@router.post("/maxcut", response_model=SolveMaxCutResponse, summary="Run BBS on Max-Cut")
def solve_maxcut(request: SolveMaxCutRequest) -> Any:
    try:
        run = solve(encode_maxcut(request.graph), request.config)
        return SolveMaxCutResponse(run=run, cut=cut_size(request.graph, run.best_sample))
    except ValueError as ve:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(ve))
    except Exception as e:
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))


@router.post("/jssp", response_model=SolveJsspResponse, summary="Run BBS on a Job-Shop Instance")
def solve_jssp(request: SolveJsspRequest) -> Any:
    try:
        q, vmap = encode_jssp(request.instance, request.weights, request.gamma)
        run = solve(q, request.config)
        decoded = decode_schedule(vmap, run.best_sample)
        if isinstance(decoded, Schedule):
            return SolveJsspResponse(run=run, variables=vmap.labels(), schedule=decoded)
        return SolveJsspResponse(run=run, variables=vmap.labels(), violations=decoded)
    except ValueError as ve:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(ve))
    except Exception as e:
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))
