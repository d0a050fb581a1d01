import pytest

from spikecam.backend import HAS_NUMBA, set_backend


@pytest.fixture(params=["numba", "numpy"] if HAS_NUMBA else ["numpy"])
def backend(request):
    """Run the test under each kernel backend."""
    set_backend(request.param)
    yield request.param
    set_backend("auto")
