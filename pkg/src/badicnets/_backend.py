"""Kernel backend selection: compiled extension if built, else pure Python."""

from __future__ import annotations

from contextlib import contextmanager

from . import _kernels_py

try:  # pragma: no cover - depends on the build environment
    from . import _kernels as _compiled
except ImportError:  # pragma: no cover
    _compiled = None

_active = _compiled if _compiled is not None else _kernels_py


def active_backend():
    return _active


def backend_name() -> str:
    return _active.IMPLEMENTATION


def available_backends() -> dict[str, object]:
    out = {"python": _kernels_py}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out


@contextmanager
def use_backend(name: str):
    """Force a backend within a scope (benchmarks and backend-parity tests)."""
    global _active
    previous = _active
    _active = available_backends()[name]
    try:
        yield _active
    finally:
        _active = previous


def gen_block_digits(*args):
    return _active.gen_block_digits(*args)


def composition_counts(*args):
    return _active.composition_counts(*args)
