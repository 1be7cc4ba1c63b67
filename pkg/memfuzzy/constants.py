# -*- coding: utf-8 -*-

# Copyright 2020 ICON Foundation
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

COLUMN = 80

# Memristor device (linear ion drift)
R_ON = 100.0
R_OFF = 16000.0
# 1 V for 1 ms moves the dopant state by 0.01
K_DRIFT = 10.0
V_READ = 0.2
V_WRITE = 1.0
T_WRITE = 0.01
PULSE_BUDGET = 1000
W_MAX = 1.0

# Fuzzy network
DEFAULT_GRID = 16
DEFAULT_EXPONENT = 2.0
DEFAULT_CONCEPT = "big"

BACKEND_IDEAL = "ideal"
BACKEND_DEVICE = "device"
BACKENDS = (BACKEND_IDEAL, BACKEND_DEVICE)

COLUMNS_AS_INPUTS = "columns"
ROWS_AS_INPUTS = "rows"

# Imaging
MAX_INTENSITY = 255
DEFAULT_SIGMA = 1.0
DEFAULT_NOISE_MEAN = 0.0
DEFAULT_NOISE_VAR = 0.0
DEFAULT_SEED = 0
CSV_DIGITS = 6

# Commands
DEFAULT_RESOLUTION = 64
DEFAULT_TOLERANCE = 0.005
DEVICE_CHECK_LIMIT = 0.01
DEVICE_CHECK_SAMPLES = 1000

NETWORK_FORMAT = "memfuzzy-network"
NETWORK_VERSION = 1

EXIT_OK = 0
EXIT_USER_ERROR = 2
EXIT_NUMERIC_ERROR = 3
