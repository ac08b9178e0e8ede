import dataclasses
from typing import Any

from poly_images.errors import InvalidInput


@dataclasses.dataclass(frozen=True)
class Budgets:
    box: int = 10
    max_tries: int = 64
    fallback_tries: int = 256
    commutator_tries: int = 64
    oracle_workers: int = 1
    oracle_max_triples: int = 2**30
    oracle_max_matrices: int = 2**20
    oracle_sample_batch: int = 1024

    @classmethod
    def from_dict(cls, config: dict[str, Any]) -> "Budgets":
        known = {field.name for field in dataclasses.fields(cls)}
        unknown = set(config) - known
        if unknown:
            raise InvalidInput(f"unknown budget settings {sorted(unknown)}", location="config")
        values = {}
        for key, value in config.items():
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise InvalidInput(f"budget {key} must be a positive integer, got {value!r}", location=f"config.{key}")
            values[key] = value
        return cls(**values)

    def to_primitive(self) -> dict[str, int]:
        return dataclasses.asdict(self)
