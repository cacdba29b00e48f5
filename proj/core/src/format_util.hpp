// Copyright 2026 The Supermeasure Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SUPERMEASURE_SRC_FORMAT_UTIL_HPP_
#define SUPERMEASURE_SRC_FORMAT_UTIL_HPP_

#include <charconv>
#include <string>
#include <system_error>

namespace supermeasure::detail {

// Locale-independent shortest round-trip decimal form, for CSV output.
inline std::string double_to_string(double value) {
  char buffer[32];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, ptr);
}

}  // namespace supermeasure::detail

#endif  // SUPERMEASURE_SRC_FORMAT_UTIL_HPP_
