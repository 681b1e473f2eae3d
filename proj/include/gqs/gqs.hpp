// Copyright 2026 The gqsearch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


/**
 * @file
 * Umbrella header for the gqsearch library.
 */
#pragma once

#include "gqs/error.hpp"
#include "gqs/numerics.hpp"
#include "gqs/spectra.hpp"
#include "gqs/search.hpp"
#include "gqs/pea.hpp"
#include "gqs/harness/config.hpp"
#include "gqs/harness/report.hpp"
#include "gqs/harness/experiment.hpp"
#include "gqs/harness/validate.hpp"
