"""Access to packaged default data files."""

from importlib import resources


def read_text(name: str) -> str:
    return resources.files("theraloop.data").joinpath(name).read_text(encoding="utf-8")


def path_of(name: str):
    return resources.files("theraloop.data").joinpath(name)
