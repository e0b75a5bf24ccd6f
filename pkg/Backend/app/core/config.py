from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field, ValidationError
from app.core.logging_config import setup_logging

logger = setup_logging()


class Settings(BaseSettings):
    PATTERN_SPACE_CAP: int = Field(2_000_000, gt=0, description="Largest Fock basis the simulator will enumerate")
    MAX_EXACT_VARIABLES: int = Field(30, gt=0, le=40, description="Hard cap for exhaustive QUBO search")
    EXACT_BLOCK_BITS: int = Field(10, ge=1, le=22, description="Variables evaluated together as one numpy block in the Gray-code scan")
    GRAPH_CONNECT_ATTEMPTS: int = Field(1000, gt=0, description="Resampling budget for connected random graphs")

    SPSA_A: float = Field(0.1, gt=0, description="SPSA step-size numerator a")
    SPSA_C: float = Field(0.1, gt=0, description="SPSA perturbation numerator c")
    SPSA_ALPHA: float = Field(0.602, gt=0, description="Decay exponent of a_k")
    SPSA_GAMMA: float = Field(0.101, gt=0, description="Decay exponent of c_k")
    SPSA_STABILITY_FRACTION: float = Field(0.1, ge=0, description="Stability offset A as a fraction of the iteration budget")
    SPSA_CALIBRATE: bool = Field(True, description="Rescale a from measured gradients before training")
    SPSA_TARGET_STEP: float = Field(0.628, gt=0, description="Size of the first calibrated update, per parameter")
    SPSA_CALIBRATION_STEPS: int = Field(5, ge=1, description="Gradient estimates averaged during calibration")

    OUTPUT_DIR: str = Field("results", description="Default directory for bench reports")

    model_config = SettingsConfigDict(env_file=".env", extra="ignore")


try:
    settings = Settings()
    logger.debug(f"Configuration loaded: {settings.model_dump()}")
except ValidationError as ve:
    logger.error(f"Configuration validation error: {ve}")
    raise
except Exception as e:
    logger.error(f"Error loading configuration: {e}")
    raise
