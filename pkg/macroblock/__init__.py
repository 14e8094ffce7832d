from importlib.metadata import version, PackageNotFoundError

try:
    __version__ = version("macroblock")
except PackageNotFoundError:
    __version__ = "not installed"
