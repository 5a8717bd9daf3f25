from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("sphere-spectra")
except PackageNotFoundError:
    __version__ = "unknown"
