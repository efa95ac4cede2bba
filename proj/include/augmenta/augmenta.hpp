//
// Copyright 2026 The Augmenta Authors
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

#ifndef AUGMENTA_AUGMENTA_HPP_
#define AUGMENTA_AUGMENTA_HPP_

#include "augmenta/augmenters.hpp"
#include "augmenta/backends.hpp"
#include "augmenta/config.hpp"
#include "augmenta/datamodel.hpp"
#include "augmenta/digest.hpp"
#include "augmenta/error.hpp"
#include "augmenta/evalharness.hpp"
#include "augmenta/instructgen.hpp"
#include "augmenta/parallel.hpp"
#include "augmenta/pipeline.hpp"
#include "augmenta/report.hpp"
#include "augmenta/selector.hpp"
#include "augmenta/textcore.hpp"

#endif  // AUGMENTA_AUGMENTA_HPP_
