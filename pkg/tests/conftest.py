import pytest
from hypothesis import settings

from switchsim.scenarios import builtin

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


@pytest.fixture(scope="session")
def figure_models():
    return {name: builtin(name).model for name in ("fig2", "fig3", "fig4", "fig5", "fig6")}
