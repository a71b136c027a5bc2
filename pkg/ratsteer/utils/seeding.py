"""Named, process-independent random streams derived from one seed"""

import zlib

import numpy as np


class SeedStreams:
    """Independent generators keyed by purpose ("arrivals", "controller", ...)"""

    def __init__(self, seed: int):
        self.seed = int(seed)

    @staticmethod
    def _key(name: str) -> int:
        # crc32 is stable across processes, unlike hash()
        return zlib.crc32(name.encode("utf-8"))

    def sequence(self, name: str) -> np.random.SeedSequence:
        return np.random.SeedSequence([self.seed, self._key(name)])

    def generator(self, name: str) -> np.random.Generator:
        return np.random.default_rng(self.sequence(name))
