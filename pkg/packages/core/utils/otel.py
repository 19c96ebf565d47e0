from __future__ import annotations
from contextlib import contextmanager
from functools import lru_cache
from importlib.metadata import PackageNotFoundError, version
from typing import Any, Iterator, Optional
import os


def _package_version() -> str:
    try:
        return version("metapop-persist")
    except PackageNotFoundError:
        return "0+local"


@lru_cache(maxsize=None)
def setup_tracer(service_name: str) -> Optional[Any]:  # pragma: no cover - optional
    """Tracer for `service_name`; None when OpenTelemetry cannot be loaded.

    The global provider is installed once per process. Spans are exported only
    when OTEL_EXPORTER_OTLP_ENDPOINT is set.
    """
    try:
        from opentelemetry import trace
        from opentelemetry.exporter.otlp.proto.http.trace_exporter import OTLPSpanExporter
        from opentelemetry.sdk.resources import Resource
        from opentelemetry.sdk.trace import TracerProvider
        from opentelemetry.sdk.trace.export import BatchSpanProcessor
    except ImportError:
        return None

    provider = TracerProvider(
        resource=Resource.create(
            {"service.name": service_name, "service.version": _package_version()}
        )
    )
    endpoint = os.getenv("OTEL_EXPORTER_OTLP_ENDPOINT")
    if endpoint:
        provider.add_span_processor(BatchSpanProcessor(OTLPSpanExporter(endpoint=endpoint)))
    trace.set_tracer_provider(provider)
    return trace.get_tracer("metapop.analysis")


@contextmanager
def span(tracer: Optional[Any], name: str, **attributes: Any) -> Iterator[None]:
    """Wrap a block in a tracing span; a None tracer makes this a no-op."""
    if tracer is None:
        yield
        return
    with tracer.start_as_current_span(name) as current:
        for key, value in attributes.items():
            current.set_attribute(key, value)
        yield
