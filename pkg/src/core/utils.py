import hashlib
import json
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple, TypeVar

from numpy.random import Generator, Philox, SeedSequence

T = TypeVar("T")


def stable_hash_int(tag: str) -> int:
    digest = hashlib.sha256(tag.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little", signed=False)


def rng_sequence(seed: int, tag: str) -> SeedSequence:
    return SeedSequence(entropy=[seed, stable_hash_int(tag)])


def rng_for(seed: int, tag: str) -> Generator:
    """Counter-based generator; the same (seed, tag) always gives the same draws."""
    return Generator(Philox(rng_sequence(seed, tag)))


def choose(rng: Generator, items: Sequence[T]) -> T:
    return items[int(rng.integers(len(items)))]


def split_range(n: int, parts: int) -> List[Tuple[int, int]]:
    """[0, n) cut into `parts` contiguous, nearly equal half-open ranges."""
    return [(n * i // parts, n * (i + 1) // parts) for i in range(parts)]


def _default(val: Any) -> Any:
    if isinstance(val, Fraction):
        return str(val)
    if hasattr(val, "item"):
        return val.item()
    if isinstance(val, (set, frozenset)):
        return sorted(val)
    return str(val)


def to_json(val: Any, indent: Optional[int] = None) -> Optional[str]:
    return json.dumps(val, default=_default, indent=indent) if val is not None else None
