/*
 * Copyright 2026 The wvtune Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef WVTUNE_WVTUNE_HPP
#define WVTUNE_WVTUNE_HPP

#include "wvtune/alpha.hpp"
#include "wvtune/classifiers.hpp"
#include "wvtune/config.hpp"
#include "wvtune/core_stats.hpp"
#include "wvtune/csv.hpp"
#include "wvtune/discriminant.hpp"
#include "wvtune/error.hpp"
#include "wvtune/exact_error.hpp"
#include "wvtune/experiment.hpp"
#include "wvtune/linalg.hpp"
#include "wvtune/random.hpp"
#include "wvtune/rmt.hpp"

#endif  // WVTUNE_WVTUNE_HPP
