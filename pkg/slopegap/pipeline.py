"""One surface config run end to end, each stage computed once."""

import logging
import time
from functools import cached_property
from typing import List

from slopegap import distribution as dist_mod
from slopegap.config import SurfaceConfig
from slopegap.distribution import PiecewiseDistribution, VolumeResult
from slopegap.subdivision import WinnerRegion, subdivide
from slopegap.winners import WinnerRecord, sweep_winners

log = logging.getLogger(__name__)


class Pipeline:
    def __init__(self, config: SurfaceConfig, threads: int = 1):
        self.config = config
        self.threads = max(1, threads)

    @property
    def surface(self):
        return self.config.surface

    @property
    def transversal(self):
        return self.config.transversal

    @cached_property
    def records(self) -> List[WinnerRecord]:
        started = time.monotonic()
        records = sweep_winners(self.surface, self.transversal, self.config.search)
        log.info("%d winners in %.1fs", len(records), time.monotonic() - started)
        return records

    @cached_property
    def regions(self) -> List[WinnerRegion]:
        return subdivide(self.transversal, self.records)

    @cached_property
    def distribution(self) -> PiecewiseDistribution:
        return dist_mod.build_distribution(
            self.transversal, self.regions, dps=self.config.numerics.dps, threads=self.threads
        )

    @cached_property
    def volume(self) -> VolumeResult:
        return dist_mod.volume(self.distribution, tolerance=self.config.numerics.volume_tolerance)

    def region_cdf_by_winner(self, winner_index: int, t):
        """Unnormalized sweep area of the region whose winner has this index."""
        for position, region in enumerate(self.distribution.regions):
            if region.index == winner_index:
                return dist_mod.region_cdf(self.distribution, position, t)
        raise KeyError(winner_index)
