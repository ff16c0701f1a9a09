// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
#include "rng.hpp"

namespace urllcsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t master, std::string_view stream,
                             std::uint64_t index) {
  std::uint64_t h = fnv1a64(stream);
  h = splitmix64(h ^ splitmix64(master));
  h = splitmix64(h ^ splitmix64(index + 0x51a7cc9ull));
  return h;
}

std::mt19937_64 make_stream(std::uint64_t master, std::string_view stream,
                            std::uint64_t index) {
  return std::mt19937_64(substream_seed(master, stream, index));
}

}  // namespace urllcsim
