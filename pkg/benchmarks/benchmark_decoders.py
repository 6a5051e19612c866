#!/usr/bin/env python
# -*- coding: utf-8 -*-

import numpy as np

from miptlab.nn.model import build_model
from miptlab.types import WindowSpec

###############################################################################


class NetworkInferenceSuite:
    """
    Benchmark a forward pass of the decoder network over window sizes.
    """

    params = [(6, 6), (10, 16), (16, 32)]
    param_names = ["window"]

    def setup(self, window):
        depth, width = window
        self.model = build_model(WindowSpec(width // 2, width, depth), N_t=2000)
        rng = np.random.default_rng(0)
        self.images = rng.choice([-1.0, 0.0, 1.0], size=(256, depth, width, 1))

    def time_predict_proba(self, window):
        self.model.predict_proba(self.images)
