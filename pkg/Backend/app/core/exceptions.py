# app/core/exceptions.py
"""Domain errors. All of them are ValueErrors so routers map them to HTTP 400."""


class BosonicSolverError(ValueError):
    def to_dict(self) -> dict:
        return {"error": type(self).__name__, "message": str(self)}


class ParameterCountError(BosonicSolverError):
    def __init__(self, expected: int, got: int, modes: int, loops: int):
        self.expected = expected
        self.got = got
        super().__init__(
            f"Expected loops x (modes - 1) = {loops} x ({modes} - 1) = {expected} beam-splitter angles, got {got}"
        )


class DegenerateInputError(BosonicSolverError):
    pass


class CapacityError(BosonicSolverError):
    pass


class DimensionMismatchError(BosonicSolverError):
    pass


class InfeasibleHorizonError(BosonicSolverError):
    def __init__(self, job: str, operation: int, t_max: int):
        self.job = job
        self.operation = operation
        self.t_max = t_max
        super().__init__(
            f"Operation {operation} of job '{job}' has no feasible start time within t_max={t_max}"
        )


class UndefinedQualityError(BosonicSolverError):
    pass


class GraphGenerationError(BosonicSolverError):
    pass
