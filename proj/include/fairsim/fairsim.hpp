// Copyright 2026 The FairSim Authors.
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

// Umbrella header.
#ifndef FAIRSIM_FAIRSIM_HPP_
#define FAIRSIM_FAIRSIM_HPP_

#include "fairsim/config.hpp"
#include "fairsim/csv.hpp"
#include "fairsim/datagen.hpp"
#include "fairsim/error.hpp"
#include "fairsim/experiments.hpp"
#include "fairsim/fairreg.hpp"
#include "fairsim/learner.hpp"
#include "fairsim/metrics.hpp"
#include "fairsim/online.hpp"
#include "fairsim/random.hpp"
#include "fairsim/results.hpp"
#include "fairsim/usermodel.hpp"
#include "fairsim/version.hpp"

#endif  // FAIRSIM_FAIRSIM_HPP_
