#!/usr/bin/env python
# -*- coding: utf-8 -*-

###############################################################################


class DimensionNames:
    Record = "N"
    Layer = "T"
    Site = "L"
    Channel = "C"


# Outcome tensors of a dataset
DEFAULT_DIMENSION_ORDER_LIST = [
    DimensionNames.Record,
    DimensionNames.Layer,
    DimensionNames.Site,
]
DEFAULT_DIMENSION_ORDER = "".join(DEFAULT_DIMENSION_ORDER_LIST)

# Network input batches carry a trailing single channel
IMAGE_DIMENSION_ORDER_LIST = DEFAULT_DIMENSION_ORDER_LIST + [DimensionNames.Channel]
IMAGE_DIMENSION_ORDER = "".join(IMAGE_DIMENSION_ORDER_LIST)
