import os

import pytest
from hypothesis import settings

from eqwreath import kernels

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    previous = kernels.backend()
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(previous)
