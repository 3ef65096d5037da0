import os
from dotenv import load_dotenv

load_dotenv(override=False)

CLOSURE_CAP = int(os.environ.get("GALOIS_SIEVE_CLOSURE_CAP", "20000000"))
EXHAUSTIVE_ELL_CAP = int(os.environ.get("GALOIS_SIEVE_ELL_CAP", "13"))
EQUIDIST_MAX_P = int(os.environ.get("GALOIS_SIEVE_EQUIDIST_MAX_P", "10007"))

# moduli stay below 2**62 so products fit comfortably in machine words
MODULUS_LIMIT = 1 << 62

DEFAULT_ELLS = (2, 3, 5, 7, 11, 13)
DEFAULT_BUDGET = 1000
DEFAULT_SEED = 20240229

# diagnostic constants standing in for ineffective implicit constants
BOUND_SHAPE_CONSTANT = 1
SIEVE_INEQUALITY_CONSTANT = 64

OUTPUT_FORMATS = ("csv", "json")


def worker_count() -> int:
    """Pool size; GALOIS_SIEVE_THREADS wins over the CPU count."""
    raw = os.environ.get("GALOIS_SIEVE_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)


def slow_tests_enabled() -> bool:
    return os.environ.get("GALOIS_SIEVE_SLOW_TESTS", "").lower() in ("1", "true")
