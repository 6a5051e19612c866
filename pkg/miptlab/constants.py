#!/usr/bin/env python
# -*- coding: utf-8 -*-

###############################################################################
# Circuit defaults

INIT_PRODUCT = "product"
INIT_SCRAMBLED = "scrambled"
INIT_MODES = (INIT_PRODUCT, INIT_SCRAMBLED)

MIN_SUBCIRCUIT_WIDTH = 4

###############################################################################
# Light-cone box

LIGHTCONE_VELOCITY = 1
LIGHTCONE_PADDING = 2

###############################################################################
# Learning protocol

LEARNING_ERROR = 0.02
FAILURE_FRACTION = 0.2
TEST_SET_SIZE = 2000
SAMPLE_GRID_BASE = 250
SAMPLE_GRID_CAP = 16000
GENERATION_CAP = 1_000_000

# Keep test-set trajectory seeds well clear of any training budget
TEST_SEED_OFFSET = 1 << 40

###############################################################################
# Network + optimizer

KERNEL_SIZES = ((4, 4), (3, 3))
POOL_SIZE = 2
DROPOUT_RATE = 0.2
DENSE_UNIT_BASE = 512
DENSE_UNIT_STEP = 2000

LEARNING_RATE = 0.001
ADAM_BETA_1 = 0.9
ADAM_BETA_2 = 0.999
ADAM_EPSILON = 1e-8
BATCH_SIZE = 32
MAX_EPOCHS = 200
PATIENCE = 10
VALIDATION_FRACTION = 0.2

###############################################################################
# Binary formats

DATASET_MAGIC = b"MIPT-DS\x00"
DATASET_VERSION = 1
CHECKPOINT_MAGIC = b"MIPT-NN\x00"
CHECKPOINT_VERSION = 1

# Axis byte stored in dataset headers for forced-label (unpurified) datasets
AXIS_NONE_CODE = 3
