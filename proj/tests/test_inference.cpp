// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
