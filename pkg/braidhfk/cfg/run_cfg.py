from abc import ABC
from typing import Dict

from .. import constants as C


class RunCfg(ABC):
    def __init__(self):
        pass

    def get_floor_cfg(self) -> Dict:
        """
        Keyword arguments for the Dehornoy floor computation.
        """
        floor_kwargs = {
            'max_steps': C.MAX_HANDLE_STEPS,
        }
        return floor_kwargs

    def get_grid_cfg(self) -> Dict:
        """
        Keyword arguments for the theta decision on a grid: the largest grid
        built and the largest window of states explored.
        """
        grid_kwargs = {
            'max_size': C.DEFAULT_WINDOW_MAX_N,
            'max_window_states': 2_000_000,
        }
        return grid_kwargs

    def get_fixture_cfg(self) -> Dict:
        """
        Keyword arguments for the fixture checks. `bound` caps the triangle
        multiplicities searched; None means the region count of the fixture.
        """
        fixture_kwargs = {
            'bound': None,
        }
        return fixture_kwargs

    def get_cache_cfg(self) -> Dict:
        cache_kwargs = {
            'enabled': True,
            'cache_dir': None,
        }
        return cache_kwargs


class DefaultRunCfg(RunCfg):
    pass


class QuickRunCfg(RunCfg):
    """Small budgets for smoke runs; anything larger is reported as a resource error."""

    def get_floor_cfg(self):
        return {'max_steps': 100_000}

    def get_grid_cfg(self):
        return {'max_size': 7, 'max_window_states': 200_000}

    def get_fixture_cfg(self):
        return {'bound': 4}


name2runcfg = {
    'default': DefaultRunCfg,
    'quick': QuickRunCfg,
}
