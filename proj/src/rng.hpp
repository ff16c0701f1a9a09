// Copyright (c) 2026 The urllcsim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace urllcsim {

// Sub-seed for a named random stream. Streams are keyed by
// (master seed, stream name, replication index); adding a new stream to the
// simulator never shifts the draws of an existing one.
std::uint64_t substream_seed(std::uint64_t master, std::string_view stream,
                             std::uint64_t index = 0);

std::mt19937_64 make_stream(std::uint64_t master, std::string_view stream,
                            std::uint64_t index = 0);

}  // namespace urllcsim
