/*
 * Copyright (c) 2026, The piadl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

#ifndef PIADL_TRACE_IO_HPP_
#define PIADL_TRACE_IO_HPP_

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "piadl/runtime.hpp"

namespace piadl {

inline constexpr const char* kTraceHeader = "#adl-trace v1";

class MalformedTrace : public std::runtime_error {
 public:
  MalformedTrace(int line, const std::string& what)
      : std::runtime_error("trace line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Trace file layout:
//
//   #adl-trace v1
//   <step>\t<kind>\t<pid>[,<pid>...]\t<channel>\t<value>
//   ...
//   #verdict <completed|deadlocked|step-budget-exhausted>
//
// Lines starting with '#' after the header are comments.

std::string format_event(const Event& e);
Event parse_event(const std::string& line, int line_no = 0);

void write_trace(std::ostream& os, const Trace& trace);
std::string trace_to_string(const Trace& trace);

/// Throws MalformedTrace. A missing verdict line leaves kCompleted.
Trace read_trace(std::istream& is);
Trace trace_from_string(const std::string& text);

}  // namespace piadl

#endif  // PIADL_TRACE_IO_HPP_
