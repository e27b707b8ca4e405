"""Group calculus on H^n: gauge geometry, contact differentials, moment
projections, isometry fitting, metric domains, and deviation experiments.

Everything is re-exported from the compiled extension; this package only
resolves the two layouts (installed wheel vs. in-tree build directory).
"""

try:
    from . import _hrigid as _impl  # installed layout: extension inside the package
except ImportError:  # development layout: extension on sys.path next to the build
    import _hrigid as _impl

globals().update(
    {name: getattr(_impl, name) for name in dir(_impl) if not name.startswith("_")}
)
__version__ = _impl.__version__
__all__ = [name for name in dir(_impl) if not name.startswith("_")]
