// Copyright 2026 The trap2 Authors
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

#ifndef TRAP2_CLI_HPP_
#define TRAP2_CLI_HPP_

namespace trap2 {

// Entry point of the trap2 tool. Returns 0 on success, 1 on runtime
// failure and 2 on usage errors.
int run_cli(int argc, char** argv);

}  // namespace trap2

#endif  // TRAP2_CLI_HPP_
