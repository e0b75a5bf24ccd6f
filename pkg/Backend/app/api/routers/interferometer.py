# app/api/routers/interferometer.py

from typing import Any

from fastapi import APIRouter, HTTPException, status

from app.api.schemas.interferometer import (
    DistributionRequest,
    DistributionResponse,
    PatternProbability,
    SampleRequest,
    SampleResponse,
    UnitaryRequest,
    UnitaryResponse,
)
from app.services.interferometer import (
    build_unitary,
    evolve_state,
    output_distribution,
    sample,
    threshold_readout,
)

router = APIRouter(
    prefix="/interferometer",
    tags=["Interferometer"],
    responses={404: {"description": "Not found"}},
)


@router.post("/unitary", response_model=UnitaryResponse, summary="Mode Transformation Matrix")
def unitary(request: UnitaryRequest) -> Any:
    try:
        return UnitaryResponse(matrix=build_unitary(request.spec).matrix.tolist())
    except ValueError as ve:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(ve))
    except Exception as e:
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))


@router.post("/distribution", response_model=DistributionResponse, summary="Output Pattern Distribution")
def distribution(request: DistributionRequest) -> Any:
    try:
        if request.method == "evolution":
            dist = evolve_state(request.spec, request.input_state)
        else:
            dist = output_distribution(build_unitary(request.spec), request.input_state)
        entries = [PatternProbability(pattern=list(p.occupations), probability=dist[p]) for p in dist]
        return DistributionResponse(entries=entries)
    except ValueError as ve:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(ve))
    except Exception as e:
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))


@router.post("/sample", response_model=SampleResponse, summary="Sample Output Patterns")
def draw_samples(request: SampleRequest) -> Any:
    try:
        shots = sample(request.spec, request.input_state, request.shots, request.rng_seed)
        if request.threshold:
            return SampleResponse(samples=[threshold_readout(s) for s in shots])
        return SampleResponse(samples=[list(s.occupations) for s in shots])
    except ValueError as ve:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(ve))
    except Exception as e:
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))
