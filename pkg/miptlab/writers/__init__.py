#!/usr/bin/env python
# -*- coding: utf-8 -*-

from .checkpoint_writer import CheckpointWriter  # noqa: F401
from .dataset_writer import DatasetWriter  # noqa: F401
from .writer import Writer  # noqa: F401
