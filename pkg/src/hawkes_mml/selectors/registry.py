"""Selector registry for hawkes-mml."""

import importlib
import pkgutil
from pathlib import Path
from typing import Dict, List, Optional

from hawkes_mml.selectors.base import SelectorBase
from hawkes_mml.utils.errors import UnknownSelectorError
from hawkes_mml.utils.logging import get_logger

logger = get_logger("registry")

_SKIP_MODULES = {"base", "registry"}


class SelectorRegistry:
    """
    Registry for discovering and looking up selectors.

    Selectors are auto-discovered from the selectors package. Each selector
    module lists its classes in a module-level `SELECTORS` sequence; every
    entry must inherit from `SelectorBase`.
    """

    def __init__(self):
        self._selectors: Dict[str, SelectorBase] = {}

    def discover_selectors(self) -> None:
        """Import every module of hawkes_mml.selectors and register its SELECTORS."""
        import hawkes_mml.selectors as selectors_package

        package_path = Path(selectors_package.__file__).parent

        for module_info in pkgutil.iter_modules([str(package_path)]):
            if module_info.ispkg or module_info.name in _SKIP_MODULES:
                continue
            module = importlib.import_module(f"hawkes_mml.selectors.{module_info.name}")
            for selector_class in getattr(module, "SELECTORS", []):
                if (
                    isinstance(selector_class, type)
                    and issubclass(selector_class, SelectorBase)
                ):
                    self.register_selector(selector_class())

        logger.debug(
            f"Discovered {len(self._selectors)} selectors: {list(self._selectors.keys())}"
        )

    def register_selector(self, selector: SelectorBase) -> None:
        """
        Manually register a selector.

        Args:
            selector: Selector instance to register
        """
        self._selectors[selector.name] = selector
        logger.debug(f"Registered selector: {selector.name}")

    def get_selector(self, name: str) -> Optional[SelectorBase]:
        """
        Get a selector by name.

        Args:
            name: Selector name

        Returns:
            Selector instance or None if not found
        """
        return self._selectors.get(name)

    def list_selectors(self) -> List[str]:
        """
        List all registered selector names.

        Returns:
            List of selector names
        """
        return list(self._selectors.keys())

    def get_selector_info(self) -> List[Dict[str, str]]:
        """
        Get information about all registered selectors.

        Returns:
            List of dictionaries with selector info
        """
        return [
            {"name": s.name, "description": s.description} for s in self._selectors.values()
        ]


_default_registry: Optional[SelectorRegistry] = None


def default_registry() -> SelectorRegistry:
    """Process-wide registry, discovered on first use."""
    global _default_registry
    if _default_registry is None:
        _default_registry = SelectorRegistry()
        _default_registry.discover_selectors()
    return _default_registry


def get_selector(name: str) -> SelectorBase:
    """
    Look up a selector in the default registry.

    Raises:
        UnknownSelectorError: If no selector has that name
    """
    registry = default_registry()
    selector = registry.get_selector(name)
    if selector is None:
        raise UnknownSelectorError(name, sorted(registry.list_selectors()))
    return selector
