from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("riemann")
except PackageNotFoundError:
    # package is not installed
    pass
