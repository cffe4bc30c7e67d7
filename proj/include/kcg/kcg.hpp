// Copyright 2026 The kcgame Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "kcg/analysis.hpp"
#include "kcg/basic_set.hpp"
#include "kcg/bitstring.hpp"
#include "kcg/decompressor.hpp"
#include "kcg/dyadic.hpp"
#include "kcg/errors.hpp"
#include "kcg/game.hpp"
#include "kcg/kraft_chaitin.hpp"
#include "kcg/strategies.hpp"
#include "kcg/trace.hpp"
#include "kcg/universal_set.hpp"
