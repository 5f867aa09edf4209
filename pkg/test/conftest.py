import os

import numpy as np
import pytest

from moyal.cli.config import DEFAULTS_ENV_VAR

# _PYTEST_RAISE=1 lets a debugger catch the original exception instead of pytest's report
if os.getenv('_PYTEST_RAISE', "0") != "0":

    @pytest.hookimpl(tryfirst=True)
    def pytest_exception_interact(call):
        raise call.excinfo.value

    @pytest.hookimpl(tryfirst=True)
    def pytest_internalerror(excinfo):
        raise excinfo.value

@pytest.fixture(autouse=True)
def isolated_run(request, monkeypatch):
    """Run from the repo root, ignoring any defaults file set in the caller's environment"""
    monkeypatch.chdir(os.path.dirname(request.fspath.dirname))
    monkeypatch.delenv(DEFAULTS_ENV_VAR, raising=False)

@pytest.fixture
def rng(request):
    """Generator seeded from the test name, so each test draws the same numbers every run"""
    return np.random.default_rng([ord(c) for c in request.node.name])
