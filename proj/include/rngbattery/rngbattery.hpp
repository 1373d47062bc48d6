// Copyright 2026 The rngbattery Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RNGBATTERY_RNGBATTERY_HPP_
#define RNGBATTERY_RNGBATTERY_HPP_

#include "rngbattery/battery.hpp"
#include "rngbattery/errors.hpp"
#include "rngbattery/generators.hpp"
#include "rngbattery/ingest.hpp"
#include "rngbattery/report.hpp"
#include "rngbattery/result.hpp"
#include "rngbattery/stats.hpp"

#endif  // RNGBATTERY_RNGBATTERY_HPP_
