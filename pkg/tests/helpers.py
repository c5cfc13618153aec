import json
from importlib import resources

from contexture.context_data import FactorialSystem


def bundled(name):
    return json.loads(resources.files("contexture.data").joinpath(f"{name}.json").read_text())


def bundled_system(name):
    return FactorialSystem.from_json(bundled(name))
