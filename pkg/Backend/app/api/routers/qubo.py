# app/api/routers/qubo.py

from typing import Any

from fastapi import APIRouter, HTTPException, status

from app.api.schemas.qubo import JsspEncodeRequest, MaxCutEncodeRequest, QuboResponse
from app.services.qubo import encode_jssp, encode_maxcut

router = APIRouter(
    prefix="/qubo",
    tags=["QUBO"],
    responses={404: {"description": "Not found"}},
)


@router.post("/maxcut", response_model=QuboResponse, summary="Encode Max-Cut")
def maxcut(request: MaxCutEncodeRequest) -> Any:
    try:
        q = encode_maxcut(request.graph)
        return QuboResponse(**q.to_payload(), warnings=q.warnings)
    except ValueError as ve:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(ve))
    except Exception as e:
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))


@router.post("/jssp", response_model=QuboResponse, summary="Encode Job-Shop Instance")
def jssp(request: JsspEncodeRequest) -> Any:
    try:
        q, vmap = encode_jssp(request.instance, request.weights, request.gamma)
        return QuboResponse(**q.to_payload(), variables=vmap.labels(), warnings=q.warnings)
    except ValueError as ve:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(ve))
    except Exception as e:
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))
