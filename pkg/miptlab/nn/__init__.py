#!/usr/bin/env python
# -*- coding: utf-8 -*-

from .model import (  # noqa: F401
    ModelConfig,
    TrainedModel,
    TrainHistory,
    build_model,
    forward,
)
from .training import (  # noqa: F401
    EvalReport,
    TrainConfig,
    evaluate,
    gradient_check,
    min_training_samples,
    train,
)
