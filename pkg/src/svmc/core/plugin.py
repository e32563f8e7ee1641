"""
플러그인 시스템 구현

Extractor 와 Loader 구현체를 TYPE 이름으로 등록하고 생성합니다.
"""
import importlib
import inspect
import pkgutil
from typing import Any, Dict, List, Optional, Type, TypeVar

from svmc.extractors.base import Extractor
from svmc.loaders.base import Loader

T = TypeVar("T")


class PluginRegistry:
    """플러그인 등록 및 관리"""

    _extractor_registry: Dict[str, Type[Extractor]] = {}
    _loader_registry: Dict[str, Type[Loader]] = {}

    @classmethod
    def register_extractor(cls, name: str, extractor_class: Type[Extractor]) -> None:
        cls._extractor_registry[name] = extractor_class

    @classmethod
    def register_loader(cls, name: str, loader_class: Type[Loader]) -> None:
        cls._loader_registry[name] = loader_class

    @classmethod
    def get_extractor(cls, name: str) -> Type[Extractor]:
        """이름으로 Extractor 클래스 검색

        Raises:
            ValueError: 등록되지 않은 Extractor 유형
        """
        if name not in cls._extractor_registry:
            available = ", ".join(sorted(cls._extractor_registry))
            raise ValueError(f"등록되지 않은 Extractor 유형: {name}. 사용 가능한 유형: {available}")
        return cls._extractor_registry[name]

    @classmethod
    def get_loader(cls, name: str) -> Type[Loader]:
        """이름으로 Loader 클래스 검색

        Raises:
            ValueError: 등록되지 않은 Loader 유형
        """
        if name not in cls._loader_registry:
            available = ", ".join(sorted(cls._loader_registry))
            raise ValueError(f"등록되지 않은 Loader 유형: {name}. 사용 가능한 유형: {available}")
        return cls._loader_registry[name]

    @classmethod
    def list_extractors(cls) -> List[str]:
        return sorted(cls._extractor_registry)

    @classmethod
    def list_loaders(cls) -> List[str]:
        return sorted(cls._loader_registry)


def _is_subclass_of(cls: Any, base_class: Type[T]) -> bool:
    return inspect.isclass(cls) and issubclass(cls, base_class) and cls is not base_class


def _plugin_name(cls: Any, suffix: str) -> str:
    """TYPE 속성이 있으면 그 값, 없으면 접미사를 뗀 소문자 클래스 이름"""
    if getattr(cls, "TYPE", ""):
        return cls.TYPE
    name = cls.__name__.lower()
    return name[: -len(suffix)] if name.endswith(suffix) else name


def discover_plugins(package_names: Optional[List[str]] = None) -> None:
    """플러그인 발견 및 등록

    Args:
        package_names: 검색할 패키지 이름 목록, None이면 기본 패키지 검색
    """
    if package_names is None:
        package_names = ["svmc.extractors", "svmc.loaders"]

    for package_name in package_names:
        try:
            package = importlib.import_module(package_name)
        except ImportError:
            continue

        for _, module_name, _ in pkgutil.iter_modules(package.__path__, package.__name__ + "."):
            try:
                module = importlib.import_module(module_name)
            except ImportError:
                continue

            for _, obj in inspect.getmembers(module, inspect.isclass):
                # 같은 모듈에 정의된 클래스만
                if obj.__module__ != module.__name__ or inspect.isabstract(obj):
                    continue
                if _is_subclass_of(obj, Extractor):
                    PluginRegistry.register_extractor(_plugin_name(obj, "extractor"), obj)
                if _is_subclass_of(obj, Loader):
                    PluginRegistry.register_loader(_plugin_name(obj, "loader"), obj)


def create_extractor(extractor_type: str, config: Dict[str, Any]) -> Extractor:
    """Extractor 인스턴스 생성"""
    if not PluginRegistry.list_extractors():
        discover_plugins()
    return PluginRegistry.get_extractor(extractor_type)(config)


def create_loader(loader_type: str, config: Dict[str, Any]) -> Loader:
    """Loader 인스턴스 생성"""
    if not PluginRegistry.list_loaders():
        discover_plugins()
    return PluginRegistry.get_loader(loader_type)(config)
