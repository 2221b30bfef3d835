// Copyright 2026 The elfz Authors.
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

#ifndef ELFZ_SUBPROCESS_HPP_
#define ELFZ_SUBPROCESS_HPP_

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

namespace elfz {

struct ProcessResult {
  int exit_code = -1;     // valid when exited normally
  int term_signal = 0;    // nonzero when killed by a signal
  bool timed_out = false;
  bool spawn_failed = false;
  std::string out;        // captured stdout (truncated to capture_limit)
  std::string err;        // captured stderr (truncated to capture_limit)

  bool ok() const { return !timed_out && !spawn_failed && term_signal == 0 && exit_code == 0; }
};

// Runs argv[0] (PATH lookup) with stdin from /dev/null. The child leads its
// own process group, so a timeout kills everything it spawned.
ProcessResult run_process(const std::vector<std::string>& argv,
                          std::chrono::milliseconds timeout,
                          size_t capture_limit = 1 << 20);

// A private directory removed (recursively) on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix = "elfz");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  TempDir(TempDir&& other) noexcept;
  TempDir& operator=(TempDir&& other) noexcept;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Substitutes every "{key}" in each argument. Unknown placeholders are left
// as they are.
std::vector<std::string> expand_argv(
    const std::vector<std::string>& tmpl,
    const std::vector<std::pair<std::string, std::string>>& values);

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, std::string_view data);

}  // namespace elfz

#endif  // ELFZ_SUBPROCESS_HPP_
