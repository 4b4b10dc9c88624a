"""Optional numba acceleration.

The scalar physics kernels are written so that the same source compiles under
numba and runs unmodified under CPython; without numba everything still works,
just slowly (long sweeps become impractical).
"""

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only on numba-free installs

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def decorate(func):
            return func

        return decorate


__all__ = ["njit"]
