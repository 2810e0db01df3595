import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

PACKAGE_DIR = Path(__file__).resolve().parent


class Settings:
    CATALOG_PATH = Path(os.getenv("PD_CATALOG_PATH", str(PACKAGE_DIR / "data" / "catalog.txt")))
    JOBS = int(os.getenv("PD_JOBS", "1"))
    BUDGET_SECONDS = float(os.getenv("PD_BUDGET_SECONDS", "60"))
    SECTION_BUDGET_SECONDS = float(os.getenv("PD_SECTION_BUDGET_SECONDS", "120"))
    BUDGET_NODES_PER_SECOND = int(os.getenv("PD_BUDGET_NODES_PER_SECOND", "20000"))
    CANDIDATE_LIMIT = int(os.getenv("PD_CANDIDATE_LIMIT", "10000"))
    SERIES_MAX_N = int(os.getenv("PD_SERIES_MAX_N", "12"))
    CELL_MAX_N = int(os.getenv("PD_CELL_MAX_N", "6"))
    LOG_LEVEL = os.getenv("PD_LOG_LEVEL", "WARNING").upper()
    NO_COLOR = os.getenv("NO_COLOR") is not None


settings = Settings()
