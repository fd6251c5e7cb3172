import importlib
import os
import sys

import pytest


@pytest.fixture(scope="session")
def rf():
    """The compiled module, either from an installed package or a build dir."""
    try:
        return importlib.import_module("rfrac")
    except ImportError:
        pass
    build_dir = os.environ.get("RFRAC_PYMODULE_DIR")
    if build_dir:
        sys.path.insert(0, build_dir)
    return importlib.import_module("_rfrac")
