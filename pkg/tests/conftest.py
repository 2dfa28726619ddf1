import os
import shutil
import tempfile
from typing import Generator

import pytest
from hypothesis import settings

from pgroup_mcp.server_registry import ServerRegistry

settings.register_profile("desk", max_examples=25, deadline=None)
settings.register_profile("ci", max_examples=100, deadline=None)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "desk"))


@pytest.fixture(scope="session", autouse=True)
def global_patch_and_tempdir() -> Generator[str, None, None]:
    temp_dir = tempfile.mkdtemp()
    specs_dir = os.path.join(temp_dir, "specs")
    os.makedirs(specs_dir, exist_ok=True)

    os.environ["PGL_MAX_ORDER"] = "65536"
    os.environ["PGL_DEFAULT_BUDGET"] = "40"
    os.environ["PGL_READ_ONLY"] = "false"

    yield specs_dir

    shutil.rmtree(temp_dir)


@pytest.fixture(autouse=True)
def fresh_registry() -> Generator[None, None, None]:
    # Every server instance registers its own app in the singleton
    ServerRegistry.reset()
    yield
    ServerRegistry.reset()
