// Copyright 2026 The gaspolar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gaspolar {

/// A parameter outside its allowed domain (e.g. n < 1, M < 1).
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Input data of the wrong shape or content (wrong length, nonzero frozen bit).
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A request that exceeds an enumeration or memory cap.
struct ResourceLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The value register cannot represent the requested objective range.
struct OverflowError : std::overflow_error {
    using std::overflow_error::overflow_error;
};

/// A run configuration that cannot be executed as given.
struct ConfigurationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bits are stored one per byte, each 0 or 1.
using Bit = std::uint8_t;
using BitVector = std::vector<Bit>;

/// Default cap on 2^K style enumerations (K or MK).
inline constexpr unsigned kEnumerationCap = 24;

inline bool is_power_of_two(std::size_t v) {
    return v != 0 && (v & (v - 1)) == 0;
}

inline unsigned floor_log2(std::size_t v) {
    unsigned r = 0;
    while (v >>= 1) {
        ++r;
    }
    return r;
}

/// Parses a 0/1 string, index 0 leftmost. Whitespace is ignored.
inline BitVector parse_bits(std::string_view text) {
    BitVector out;
    out.reserve(text.size());
    for (char ch : text) {
        if (ch == '0' || ch == '1') {
            out.push_back(static_cast<Bit>(ch - '0'));
        } else if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
            continue;
        } else {
            throw InvalidInput(std::string("not a bit character: '") + ch + "'");
        }
    }
    return out;
}

inline std::string format_bits(std::span<const Bit> bits) {
    std::string out;
    out.reserve(bits.size());
    for (Bit b : bits) {
        out.push_back(b ? '1' : '0');
    }
    return out;
}

/// Packs bits into an integer with bits[j] at position j.
inline std::uint64_t pack_bits(std::span<const Bit> bits) {
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < bits.size(); ++j) {
        v |= static_cast<std::uint64_t>(bits[j] & 1u) << j;
    }
    return v;
}

inline BitVector unpack_bits(std::uint64_t v, std::size_t len) {
    BitVector out(len);
    for (std::size_t j = 0; j < len; ++j) {
        out[j] = static_cast<Bit>((v >> j) & 1u);
    }
    return out;
}

/// SplitMix64 finalizer; used to derive independent rng seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for (master, trial, stream). Stream 0 drives the transmitter and
/// channel, stream 1 the decoder, so paired decoders see identical noise.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t stream = 0) {
    return splitmix64(splitmix64(master ^ splitmix64(trial)) + stream);
}

}  // namespace gaspolar
