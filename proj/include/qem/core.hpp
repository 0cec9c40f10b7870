// Copyright 2026 The QEM Toolkit Authors
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

#pragma once

#include "qem/core/channel.hpp"
#include "qem/core/circuit.hpp"
#include "qem/core/density_matrix.hpp"
#include "qem/core/gates.hpp"
#include "qem/core/observable.hpp"
#include "qem/core/pauli.hpp"
#include "qem/core/random.hpp"
#include "qem/core/sampling.hpp"
#include "qem/core/twirl.hpp"
#include "qem/core/types.hpp"
