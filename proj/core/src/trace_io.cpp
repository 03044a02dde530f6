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

#include "piadl/trace_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace piadl {

std::string format_event(const Event& e) {
  std::string line = std::to_string(e.step);
  line += '\t';
  line += to_string(e.kind);
  line += '\t';
  for (std::size_t i = 0; i < e.pids.size(); ++i) {
    if (i > 0) line += ',';
    line += std::to_string(e.pids[i]);
  }
  line += '\t';
  line += e.channel;
  line += '\t';
  line += e.value;
  return line;
}

Event parse_event(const std::string& line, int line_no) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  // The value is the last field and may itself not contain tabs (escaped).
  for (int i = 0; i < 4; ++i) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos)
      throw MalformedTrace(line_no, "expected 5 tab-separated fields");
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  fields.push_back(line.substr(start));
  if (fields[4].find('\t') != std::string::npos)
    throw MalformedTrace(line_no, "too many fields");

  Event e;
  auto [p, ec] = std::from_chars(fields[0].data(),
                                 fields[0].data() + fields[0].size(), e.step);
  if (ec != std::errc() || p != fields[0].data() + fields[0].size())
    throw MalformedTrace(line_no, "bad step '" + fields[0] + "'");
  auto kind = event_kind_from_string(fields[1]);
  if (!kind) throw MalformedTrace(line_no, "unknown kind '" + fields[1] + "'");
  e.kind = *kind;
  std::stringstream pids(fields[2]);
  std::string pid;
  while (std::getline(pids, pid, ',')) {
    Pid v = 0;
    auto [pp, pec] = std::from_chars(pid.data(), pid.data() + pid.size(), v);
    if (pec != std::errc() || pp != pid.data() + pid.size())
      throw MalformedTrace(line_no, "bad pid '" + pid + "'");
    e.pids.push_back(v);
  }
  if (e.pids.empty()) throw MalformedTrace(line_no, "no pids");
  if (e.kind == Event::Kind::kRendezvous && e.pids.size() != 2)
    throw MalformedTrace(line_no, "rendezvous needs sender and receiver");
  e.channel = fields[3];
  e.value = fields[4];
  return e;
}

void write_trace(std::ostream& os, const Trace& trace) {
  os << kTraceHeader << '\n';
  for (const auto& e : trace.events) os << format_event(e) << '\n';
  os << "#verdict " << to_string(trace.verdict) << '\n';
}

std::string trace_to_string(const Trace& trace) {
  std::ostringstream os;
  write_trace(os, trace);
  return os.str();
}

Trace read_trace(std::istream& is) {
  Trace t;
  std::string line;
  int line_no = 0;
  if (!std::getline(is, line) || line != kTraceHeader)
    throw MalformedTrace(1, std::string("missing header '") + kTraceHeader + "'");
  ++line_no;
  std::uint64_t expected_step = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      constexpr std::string_view kVerdict = "#verdict ";
      if (line.rfind(kVerdict, 0) == 0) {
        auto v = run_verdict_from_string(line.substr(kVerdict.size()));
        if (!v) throw MalformedTrace(line_no, "unknown verdict");
        t.verdict = *v;
      }
      continue;
    }
    Event e = parse_event(line, line_no);
    if (e.step != expected_step)
      throw MalformedTrace(line_no, "steps must be consecutive from 1");
    ++expected_step;
    t.events.push_back(std::move(e));
  }
  return t;
}

Trace trace_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_trace(is);
}

}  // namespace piadl
