// Copyright 2026 The twirl Authors
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

#include "twirl/bits.hpp"
#include "twirl/clifford.hpp"
#include "twirl/dense.hpp"
#include "twirl/design.hpp"
#include "twirl/fidelity.hpp"
#include "twirl/kraus.hpp"
#include "twirl/oracle.hpp"
#include "twirl/pauli.hpp"
#include "twirl/pauli_channel.hpp"
#include "twirl/rng.hpp"
