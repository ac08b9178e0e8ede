import logging
import importlib
from typing import TypeVar, Generic, Union

from poly_images.errors import InvalidInput
from poly_images.matrices import Matrix
from poly_images.paths.base import SolveContext, WitnessPath, WitnessTriple
from poly_images.polynomials import MultilinearCubic

log = logging.getLogger(__name__)


_V = TypeVar("_V")


class _Registry(Generic[_V]):
    def __init__(self):
        self._loaded_handlers: dict[str, _V] = {}
        self._unloaded_handlers: dict[str, str] = {}

    @classmethod
    def from_dict(cls, config: dict[str, str]):
        registry = cls()
        for name, handler in config.items():
            registry.deferred_register(name, handler)

        return registry

    def deferred_register(self, name: str, handlerclass: str):
        self._loaded_handlers.pop(name, None)
        self._unloaded_handlers[name] = handlerclass

    def register(self, name: str, handler: _V):
        self._unloaded_handlers.pop(name, None)
        self._loaded_handlers[name] = handler

    def _load_handler(self, handlerclass: str) -> _V:
        package_name, _, class_name = handlerclass.rpartition(".")
        try:
            module = importlib.import_module(package_name)
            handler_class = getattr(module, class_name)
        except (ImportError, AttributeError, ValueError) as e:
            raise InvalidInput(f"cannot load handler {handlerclass!r}: {e}", location="config") from e
        log.debug("loaded handler %s", handlerclass)
        return handler_class()

    def get(self, name: str) -> _V:
        handler = self._loaded_handlers.get(name)
        if handler is None:
            if name not in self._unloaded_handlers:
                raise InvalidInput(f"no handler named {name!r}", location=f"config.path.{name}")
            handlerclass = self._unloaded_handlers.pop(name)
            handler = self._load_handler(handlerclass)
            self._loaded_handlers[name] = handler
        return handler

    def names(self) -> list[str]:
        return sorted(set(self._loaded_handlers) | set(self._unloaded_handlers))

    def to_primitive(self) -> dict[str, str]:
        handlers = {name: f"{type(handler).__module__}.{type(handler).__name__}" for name, handler in self._loaded_handlers.items()}
        handlers.update(self._unloaded_handlers)
        return handlers

    def __str__(self):
        handlers: dict[str, Union[str, _V]] = {name: handler for name, handler in self._loaded_handlers.items()}
        for name, handlerclass in self._unloaded_handlers.items():
            handlers[name] = f"U-{handlerclass}"

        return f"<{self.__class__.__name__} handlers={handlers}>"

    def __repr__(self):
        return str(self)


class PathRegistry(_Registry[WitnessPath]):
    def solve(self, name: str, f: MultilinearCubic, target: Matrix, context: SolveContext) -> WitnessTriple:
        return self.get(name).solve(f, target, context)
