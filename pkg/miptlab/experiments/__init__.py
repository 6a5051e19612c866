#!/usr/bin/env python
# -*- coding: utf-8 -*-

from .coherent_info import (  # noqa: F401
    CoherentInfoSeries,
    coherent_info_experiment,
)
from .complexity import (  # noqa: F401
    ComplexityResult,
    complexity_experiment,
    scrambled_complexity_experiment,
)
from .config import (  # noqa: F401
    AppendixBConfig,
    CoherentInfoConfig,
    ComplexityConfig,
    CrossingConfig,
    HistogramConfig,
    LearnabilityConfig,
    ScalabilityConfig,
    load_config,
)
from .crossing import CrossingResult, crossing_analysis  # noqa: F401
from .crossing import crossing_experiment  # noqa: F401
from .histogram import purification_hist_experiment  # noqa: F401
from .learnability import LearnabilityCurve, learnability_experiment  # noqa: F401
from .reconstruction import (  # noqa: F401
    ReconstructionResult,
    appendix_b_experiment,
    appendix_b_reconstruction,
)
from .scalability import ScalabilityCell, scalability_experiment  # noqa: F401
