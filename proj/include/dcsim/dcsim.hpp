/*
 * Copyright 2026 The dcsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "dcsim/amo_buffer.hpp"
#include "dcsim/cache_memory.hpp"
#include "dcsim/covert_channel.hpp"
#include "dcsim/engine.hpp"
#include "dcsim/error.hpp"
#include "dcsim/geometry.hpp"
#include "dcsim/lfsr.hpp"
#include "dcsim/main_memory.hpp"
#include "dcsim/miss_unit.hpp"
#include "dcsim/mshr.hpp"
#include "dcsim/trace.hpp"
#include "dcsim/write_buffer.hpp"
