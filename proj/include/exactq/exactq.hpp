//
// Copyright 2026 The exactq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//


// Umbrella header.

#ifndef EXACTQ_EXACTQ_HPP_
#define EXACTQ_EXACTQ_HPP_

#include "exactq/aggregate.hpp"
#include "exactq/applications.hpp"
#include "exactq/bounds.hpp"
#include "exactq/coding.hpp"
#include "exactq/distributions.hpp"
#include "exactq/error.hpp"
#include "exactq/harness.hpp"
#include "exactq/numeric.hpp"
#include "exactq/privacy.hpp"
#include "exactq/quantizers.hpp"
#include "exactq/random.hpp"
#include "exactq/stats.hpp"

#endif  // EXACTQ_EXACTQ_HPP_
