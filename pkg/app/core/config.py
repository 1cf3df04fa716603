import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

PACKAGE_FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"
OUTPUT_FORMATS = ("text", "json", "latex")


class Settings:
    MAX_DEGREE: int
    HARD_CAP: int
    SUBALGEBRA_CAP: int
    SHUFFLE_MEMO_CAP: int
    FIXTURE_DIR: Path
    OUTPUT_FORMAT: str
    WORKERS: int
    LOG_LEVEL: str
    HOST: str
    PORT: int

    def __init__(self):
        # Degree windows
        self.HARD_CAP = int(os.getenv("HARD_CAP", 12))
        self.MAX_DEGREE = int(os.getenv("MAX_DEGREE", 8))
        if self.MAX_DEGREE < 0 or self.MAX_DEGREE > self.HARD_CAP:
            raise ValueError(f"MAX_DEGREE must lie in 0..{self.HARD_CAP}, got {self.MAX_DEGREE}.")
        self.SUBALGEBRA_CAP = int(os.getenv("SUBALGEBRA_CAP", 10))
        if self.SUBALGEBRA_CAP > self.HARD_CAP:
            raise ValueError(f"SUBALGEBRA_CAP may not exceed HARD_CAP ({self.HARD_CAP}).")
        self.SHUFFLE_MEMO_CAP = int(os.getenv("SHUFFLE_MEMO_CAP", 12))

        # Golden data
        self.FIXTURE_DIR = Path(os.getenv("FIXTURE_DIR", str(PACKAGE_FIXTURE_DIR)))

        # Output and execution
        self.OUTPUT_FORMAT = os.getenv("OUTPUT_FORMAT", "text")
        if self.OUTPUT_FORMAT not in OUTPUT_FORMATS:
            raise ValueError(f"OUTPUT_FORMAT must be one of {', '.join(OUTPUT_FORMATS)}.")
        self.WORKERS = int(os.getenv("WORKERS", 1))
        if self.WORKERS < 1:
            raise ValueError("WORKERS must be at least 1.")
        self.LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()

        # Server Configuration
        self.HOST = os.getenv("HOST", "0.0.0.0")
        self.PORT = int(os.getenv("PORT", 8000))

settings = Settings()
