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

#ifndef PIADL_HASH_HPP_
#define PIADL_HASH_HPP_

#include <cstdint>
#include <functional>
#include <string_view>

namespace piadl {

/// 128-bit state digest used for visited-set deduplication.
struct Fingerprint {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

struct FingerprintHash {
  std::size_t operator()(const Fingerprint& f) const noexcept {
    return static_cast<std::size_t>(f.lo ^ (f.hi * 0x9e3779b97f4a7c15ULL));
  }
};

/// Two independent 64-bit lanes, each a multiply-xorshift chain.
class Hasher {
 public:
  void add(std::uint64_t v) {
    a_ = mix(a_ ^ v, 0xff51afd7ed558ccdULL);
    b_ = mix(b_ + v, 0xc4ceb9fe1a85ec53ULL);
  }

  void add(std::string_view s) {
    add(s.size());
    std::uint64_t word = 0;
    int n = 0;
    for (unsigned char c : s) {
      word = (word << 8) | c;
      if (++n == 8) {
        add(word);
        word = 0;
        n = 0;
      }
    }
    if (n > 0) add(word);
  }

  Fingerprint digest() const { return {mix(a_, 0x9e3779b97f4a7c15ULL), b_}; }

 private:
  static std::uint64_t mix(std::uint64_t x, std::uint64_t m) {
    x ^= x >> 33;
    x *= m;
    x ^= x >> 29;
    return x;
  }

  std::uint64_t a_ = 0x243f6a8885a308d3ULL;
  std::uint64_t b_ = 0x13198a2e03707344ULL;
};

}  // namespace piadl

#endif  // PIADL_HASH_HPP_
