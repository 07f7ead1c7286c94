// Copyright 2026 The wiso Authors
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

#ifndef WISO_WISO_HPP_
#define WISO_WISO_HPP_

#include "wiso/error.hpp"
#include "wiso/scalar.hpp"
#include "wiso/point.hpp"
#include "wiso/metric.hpp"
#include "wiso/measure.hpp"
#include "wiso/coupling.hpp"
#include "wiso/transport.hpp"
#include "wiso/lp.hpp"
#include "wiso/kr_dual.hpp"
#include "wiso/isometry.hpp"
#include "wiso/rigidity.hpp"
#include "wiso/random.hpp"
#include "wiso/io.hpp"
#include "wiso/campaign.hpp"

#endif  // WISO_WISO_HPP_
