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

#ifndef PIADL_PARSER_HPP_
#define PIADL_PARSER_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "piadl/ast.hpp"

namespace piadl {

struct Token {
  enum class Kind {
    kKeyword,
    kIdentifier,
    kInteger,
    kText,
    kPunctuation,
    kOperator,
    kEnd,
  };

  Kind kind = Kind::kEnd;
  std::string lexeme;  // text literals: contents without the quotes
  int line = 0;
  int column = 0;

  bool is(Kind k, std::string_view lx) const {
    return kind == k && lexeme == lx;
  }
};

class ParseError : public std::runtime_error {
 public:
  enum class Reason { kSyntax, kUnterminatedString, kIllegalCharacter };

  ParseError(Reason reason, std::string message, int line, int column,
             std::vector<std::string> expected = {});

  Reason reason() const { return reason_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  Reason reason_;
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

bool is_keyword(std::string_view word);

/// Splits source text into tokens. `///` starts a comment that runs to the
/// end of the line. The trailing kEnd token is not included.
std::vector<Token> tokenize(std::string_view src);

/// Parses a whole program. The first behaviour in the file is the entry.
ArchitectureDef parse_architecture(std::string_view src);

}  // namespace piadl

#endif  // PIADL_PARSER_HPP_
