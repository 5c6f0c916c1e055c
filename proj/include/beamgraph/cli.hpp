// Copyright 2026-present the beamgraph project
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

#pragma once

#include <ostream>

namespace beamgraph {

/*! Entry point of the `beamgraph` tool: gen, build, insert, gt, search,
 * sweep and quantize. Returns the process exit code; library errors are
 * reported on `err` as "error: <code>: <message>" with exit code 1.
 */
int run_cli(int argc, const char *const *argv, std::ostream &out,
            std::ostream &err);

}  // namespace beamgraph
