from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterator, List, Optional, Type, Union

import numpy as np

from .exceptions import UnknownCheck
from .numeric import Number

Instance = Dict[str, Any]

# --- Check Interface Definition ---


@dataclass(frozen=True)
class Outcome:
    """Signed slack of one inequality (>= 0 when it holds); ``margin`` is
    None when the instance falls outside the hypotheses."""

    margin: Optional[Number]
    detail: Optional[Dict[str, Any]] = None

    @property
    def applicable(self) -> bool:
        return self.margin is not None


class CheckInterface(ABC):
    anchor: str = ""
    # Failures are margins below -tolerance
    tolerance: float = 1e-9
    # Checks that expand coset channels draw SuiteConfig.code_instances
    code_level: bool = False

    @abstractmethod
    def random_instance(self, q: int, rng: np.random.Generator) -> Instance:
        """A JSON-serializable instance over alphabet size q."""

    @abstractmethod
    def evaluate(self, instance: Instance) -> Union[Outcome, List[Outcome]]:
        """Margins for one instance."""

    def instances(
        self, q_list: List[int], count: int, rng: np.random.Generator
    ) -> Iterator[Instance]:
        for q in q_list:
            for _ in range(count):
                yield self.random_instance(q, rng)

    def perturb(self, instance: Instance, rng: np.random.Generator) -> Instance:
        """Neighbour of ``instance`` for hill climbing; a fresh draw by default."""
        return self.random_instance(int(instance["q"]), rng)

    def fixtures(self) -> List[Dict[str, Any]]:
        """Fixed instances reported alongside the random ones."""
        return []


# --- Check Registry ---
_check_registry: Dict[str, CheckInterface] = {}


def register_check(name: str) -> Callable[[Type[CheckInterface]], Type[CheckInterface]]:
    """
    Decorator to register a check class under a given name.
    Instantiates and stores the check in the registry.
    """

    def decorator(check_cls: Type[CheckInterface]) -> Type[CheckInterface]:
        _check_registry[name] = check_cls()
        return check_cls

    return decorator


def get_check(name: str) -> CheckInterface:
    try:
        return _check_registry[name]
    except KeyError:
        raise UnknownCheck(f"no check named {name!r}") from None


def list_checks() -> List[str]:
    return sorted(_check_registry)
