# app/api/routers/oracle.py

from typing import Any

from fastapi import APIRouter, HTTPException, status

from app.api.schemas.oracle import ExactJsspRequest, ExactMaxCutRequest, ExactQuboRequest, ExactResult
from app.services.oracle import exact_jssp, exact_maxcut, exact_qubo
from app.services.qubo import qubo_from_payload

router = APIRouter(
    prefix="/oracle",
    tags=["Oracle"],
    responses={404: {"description": "Not found"}},
)


@router.post("/qubo", response_model=ExactResult, summary="Exhaustive QUBO Minimum")
def qubo(request: ExactQuboRequest) -> Any:
    try:
        return exact_qubo(qubo_from_payload(request))
    except ValueError as ve:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(ve))
    except Exception as e:
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))


@router.post("/maxcut", response_model=ExactResult, summary="Exhaustive Maximum Cut")
def maxcut(request: ExactMaxCutRequest) -> Any:
    try:
        return exact_maxcut(request.graph)
    except ValueError as ve:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(ve))
    except Exception as e:
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))


@router.post("/jssp", response_model=ExactResult, summary="Minimal Makespan by Enumeration")
def jssp(request: ExactJsspRequest) -> Any:
    try:
        return exact_jssp(request.instance)
    except ValueError as ve:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(ve))
    except Exception as e:
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))
