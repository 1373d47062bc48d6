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

#include <csignal>
#include <cstdio>
#include <string>
#include <vector>

#include "rngbattery/cli.hpp"

int main(int argc, char** argv) {
  // Writes to a closed pipe must fail with EPIPE instead of killing `emit`.
  std::signal(SIGPIPE, SIG_IGN);
  std::setvbuf(stdout, nullptr, _IOFBF, 1 << 20);
  return rngbattery::Main(std::vector<std::string>(argv + 1, argv + argc),
                          stdin, stdout, stderr);
}
