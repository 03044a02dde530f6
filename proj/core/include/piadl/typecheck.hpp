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

#ifndef PIADL_TYPECHECK_HPP_
#define PIADL_TYPECHECK_HPP_

#include <string>
#include <vector>

#include "piadl/ast.hpp"

namespace piadl {

struct Diagnostic {
  enum class Kind { kUnknownName, kTypeMismatch, kArityMismatch, kDuplicateName };

  Kind kind;
  std::string message;
  std::string expected;  // kTypeMismatch only
  std::string found;     // kTypeMismatch only
  SourcePos pos;
  std::string in_template;
};

const char* to_string(Diagnostic::Kind kind);

struct TypeReport {
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
  std::string str() const;
};

/**
 * Checks the typed-channel discipline: values sent and received match the
 * connection's element type, abstraction instantiations pass an argument of
 * the parameter's type, and renames unify connections of identical type.
 * Ambient `out` accepts Integer or Text; ambient `in` yields scalars.
 *
 * Diagnostics are reported in source traversal order.
 */
TypeReport type_check(const ArchitectureDef& arch);

}  // namespace piadl

#endif  // PIADL_TYPECHECK_HPP_
