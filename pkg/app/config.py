import logging
import os
import platform

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

logger = logging.getLogger(__name__)


def _flag(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() == "true"


class BaseConfig:
    """Base configuration class with common settings."""
    # System settings
    IS_WINDOWS = platform.system() == "Windows"
    ENV = os.getenv("PARKSIM_ENV", "development")
    APP_NAME = os.getenv("PARKSIM_APP_NAME", "park-sim")

    # Output and logging
    OUT_DIR = os.getenv("PARKSIM_OUT_DIR", os.path.join(os.getcwd(), "out"))
    LOG_LEVEL = os.getenv("PARKSIM_LOG_LEVEL", "INFO")
    LOG_TO_CONSOLE = _flag("PARKSIM_LOG_TO_CONSOLE", "true")
    LOG_TO_FILE = _flag("PARKSIM_LOG_TO_FILE", "false")
    LOG_FILE_PATH = os.getenv("PARKSIM_LOG_FILE", os.path.join(OUT_DIR, "park-sim.log"))

    # Reproducibility
    MASTER_SEED = int(os.getenv("PARKSIM_MASTER_SEED", "20250130"))
    WORKERS = int(os.getenv("PARKSIM_WORKERS", "1"))

    # Solver settings
    VI_TOL = float(os.getenv("PARKSIM_VI_TOL", "1e-9"))
    VI_MAX_SWEEPS = int(os.getenv("PARKSIM_VI_MAX_SWEEPS", "100000"))

    # Simulation settings
    PATIENT_CAP_MIN = float(os.getenv("PARKSIM_PATIENT_CAP_MIN", "60"))
    SEARCH_HORIZON_MIN = float(os.getenv("PARKSIM_SEARCH_HORIZON_MIN", "240"))
    PROB_EPSILON = float(os.getenv("PARKSIM_PROB_EPSILON", "1e-3"))
    MC_SHARD_SIZE = int(os.getenv("PARKSIM_MC_SHARD_SIZE", "250000"))

    # Reference times (minutes) used by the comparison tables
    TIME_TO_DRIVE_DENSE = float(os.getenv("PARKSIM_TIME_TO_DRIVE_DENSE", "10"))
    TIME_TO_DRIVE_SPARSE = float(os.getenv("PARKSIM_TIME_TO_DRIVE_SPARSE", "6"))
    TRANSIT_TIME = float(os.getenv("PARKSIM_TRANSIT_TIME", "20"))

    # Metrics and caching
    METRICS_ENABLED = _flag("PARKSIM_METRICS_ENABLED", "true")
    CACHE_MAXSIZE = int(os.getenv("PARKSIM_CACHE_MAXSIZE", "64"))

    # Data files expected by the data-backed presets
    DATA_DIR = os.getenv("PARKSIM_DATA_DIR", os.path.join(os.getcwd(), "data"))
    OCCUPANCY_FILE = os.getenv("PARKSIM_OCCUPANCY_FILE", "occupancy.csv")
    TRANSACTIONS_FILE = os.getenv("PARKSIM_TRANSACTIONS_FILE", "transactions.csv")

    @classmethod
    def as_dict(cls) -> dict:
        """Public settings as a plain dictionary."""
        return {
            k: getattr(cls, k) for k in dir(cls)
            if k.isupper() and not k.startswith('_')
        }


class DevelopmentConfig(BaseConfig):
    """Development configuration."""
    DEBUG = True
    TESTING = False


class TestingConfig(BaseConfig):
    """Testing configuration."""
    DEBUG = False
    TESTING = True
    LOG_TO_FILE = False
    METRICS_ENABLED = False
    WORKERS = 1


class ProductionConfig(BaseConfig):
    """Production configuration."""
    DEBUG = False
    TESTING = False
    LOG_LEVEL = os.getenv("PARKSIM_LOG_LEVEL", "WARNING")


_CONFIGS = {
    "development": DevelopmentConfig,
    "testing": TestingConfig,
    "production": ProductionConfig,
}


def get_config(env: str = None):
    """Return the configuration class for an environment name."""
    name = (env or BaseConfig.ENV).lower()
    if name not in _CONFIGS:
        logger.warning(f"Unknown PARKSIM_ENV '{name}', falling back to development")
        name = "development"
    return _CONFIGS[name]


Config = get_config()
