import logging

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture(autouse=True)
def reset_hqgeo_logger():
    """Drop handlers bound to streams captured by an earlier test."""
    yield
    logger = logging.getLogger('hqgeo')
    for handler in list(logger.handlers):
        handler.close()
        logger.removeHandler(handler)
