from pathlib import Path
import os

from dotenv import load_dotenv

load_dotenv()


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    return int(value) if value not in (None, "") else default


class Config:
    # Project paths
    PROJECT_ROOT = Path(__file__).parent
    SRC_DIR = PROJECT_ROOT / "src"
    RESULTS_DIR = Path(os.getenv("SELMER_RESULTS_DIR", str(PROJECT_ROOT / "results")))

    # Create directories if they don't exist
    RESULTS_DIR.mkdir(parents=True, exist_ok=True)

    # Norm equation search: gamma scanned up to NORM_GAMMA_START, then extended
    # by doubling until NORM_GAMMA_MAX
    NORM_GAMMA_START = _env_int("SELMER_NORM_GAMMA_START", 10**6)
    NORM_GAMMA_MAX = _env_int("SELMER_NORM_GAMMA_MAX", 10**8)
    NORM_ALTERNATIVES = 4

    # Oracles
    CLASSGROUP_MAX_N = _env_int("SELMER_CLASSGROUP_MAX_N", 10**7)
    LOCAL_PRECISION = 3
    LOCAL_PRECISION_2ADIC = 8

    # Sweeps
    SIEVE_MAX = _env_int("SELMER_SIEVE_MAX", 10**7)
    SWEEP_MAX_X = 10**8
    SWEEP_BLOCK = 50_000
    DEFAULT_SEED = _env_int("SELMER_SEED", 0)
    DEFAULT_JOBS = _env_int("SELMER_JOBS", 1)

    # Chart colors and themes
    DEFAULT_COLORS = {
        'sha': '#28a745',
        'no_sha': '#dc3545',
        'inadmissible': '#6c757d',
        'predicted': '#1f77b4'
    }

    CHART_THEME = 'plotly_white'

    # Sample inputs for dropdowns
    SAMPLE_TRIPLE_KS = [0, 2, 3, 6, 7, 9, 10, 11]
    SAMPLE_N = [17, 41, 113, 137, 1241, 2329]

# Global config instance
config = Config()
