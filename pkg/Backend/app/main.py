# app/main.py

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from app.api.routers import interferometer, oracle, qubo, solver

app = FastAPI(
    title="Binary Bosonic Solver API",
    description="Simulated time-bin boson sampler, QUBO encodings, the BBS training loop and exact oracles",
    version="1.0.0",
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(interferometer.router)
app.include_router(qubo.router)
app.include_router(solver.router)
app.include_router(oracle.router)


@app.get("/", tags=["Root"])
def read_root():
    return JSONResponse(content={"status": "ok"}, status_code=200)
