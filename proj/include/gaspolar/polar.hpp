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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gaspolar/common.hpp"

namespace gaspolar {

/// Polar code of length N = 2^n with an explicit frozen set. Frozen bits are
/// always zero and no bit-reversal permutation is applied: G_N is the plain
/// n-th Kronecker power of [[1,0],[1,1]].
class PolarCode {
   public:
    PolarCode(std::size_t length, std::size_t dimension, std::vector<std::size_t> frozen)
        : length_(length), dimension_(dimension), frozen_(std::move(frozen)) {
        if (length < 2 || !is_power_of_two(length)) {
            throw InvalidParameter("code length must be a power of two >= 2, got " + std::to_string(length));
        }
        if (dimension > length) {
            throw InvalidParameter("dimension exceeds code length");
        }
        std::sort(frozen_.begin(), frozen_.end());
        if (std::adjacent_find(frozen_.begin(), frozen_.end()) != frozen_.end()) {
            throw InvalidParameter("frozen set contains duplicates");
        }
        if (!frozen_.empty() && frozen_.back() >= length) {
            throw InvalidParameter("frozen index out of range");
        }
        if (frozen_.size() != length - dimension) {
            throw InvalidParameter("frozen set size must equal N - K (" + std::to_string(length - dimension) +
                                   "), got " + std::to_string(frozen_.size()));
        }
        is_frozen_.assign(length, 0);
        for (auto f : frozen_) {
            is_frozen_[f] = 1;
        }
        for (std::size_t i = 0; i < length; ++i) {
            if (!is_frozen_[i]) {
                info_.push_back(i);
            }
        }
    }

    std::size_t length() const { return length_; }
    std::size_t dimension() const { return dimension_; }
    unsigned stages() const { return floor_log2(length_); }
    const std::vector<std::size_t>& frozen_set() const { return frozen_; }
    const std::vector<std::size_t>& info_set() const { return info_; }
    bool is_frozen(std::size_t i) const { return is_frozen_[i] != 0; }
    double rate() const { return static_cast<double>(dimension_) / static_cast<double>(length_); }

    friend bool operator==(const PolarCode& a, const PolarCode& b) {
        return a.length_ == b.length_ && a.frozen_ == b.frozen_;
    }

   private:
    std::size_t length_;
    std::size_t dimension_;
    std::vector<std::size_t> frozen_;
    std::vector<std::size_t> info_;
    std::vector<Bit> is_frozen_;
};

using BinaryMatrix = std::vector<BitVector>;

/// G_2^{(x)n} as a dense row-major matrix.
inline BinaryMatrix generator_matrix(int n) {
    if (n < 1) {
        throw InvalidParameter("generator_matrix requires n >= 1");
    }
    if (n > 16) {
        throw ResourceLimit("generator_matrix limited to n <= 16");
    }
    BinaryMatrix g{{1, 0}, {1, 1}};
    for (int level = 1; level < n; ++level) {
        std::size_t sz = g.size();
        BinaryMatrix next(2 * sz, BitVector(2 * sz, 0));
        for (std::size_t r = 0; r < sz; ++r) {
            for (std::size_t c = 0; c < sz; ++c) {
                // Kronecker with [[1,0],[1,1]] on the left.
                next[r][c] = g[r][c];
                next[r + sz][c] = g[r][c];
                next[r + sz][c + sz] = g[r][c];
            }
        }
        g = std::move(next);
    }
    return g;
}

/// Ordered (control, target) pairs; applying target ^= control in order maps
/// u to u * G_N.
struct CnotSchedule {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Recursive butterfly: stage s = 0..n-1 uses half-width h = 2^s and XORs
/// position j+h into position j within each block of size 2h.
inline CnotSchedule cnot_schedule(const PolarCode& code) {
    CnotSchedule sched;
    const std::size_t len = code.length();
    sched.pairs.reserve(len / 2 * code.stages());
    for (std::size_t half = 1; half < len; half <<= 1) {
        for (std::size_t block = 0; block < len; block += 2 * half) {
            for (std::size_t j = block; j < block + half; ++j) {
                sched.pairs.emplace_back(j + half, j);
            }
        }
    }
    return sched;
}

/// Applies a schedule to a classical register in place.
inline void apply_schedule(const CnotSchedule& sched, std::span<Bit> reg) {
    for (auto [control, target] : sched.pairs) {
        reg[target] ^= reg[control];
    }
}

namespace detail {

inline void butterfly_in_place(std::span<Bit> v) {
    const std::size_t len = v.size();
    for (std::size_t half = 1; half < len; half <<= 1) {
        for (std::size_t block = 0; block < len; block += 2 * half) {
            for (std::size_t j = block; j < block + half; ++j) {
                v[j] ^= v[j + half];
            }
        }
    }
}

}  // namespace detail

/// x = u * G_N over GF(2). u must have zeros at the frozen positions.
inline BitVector polar_encode(const PolarCode& code, std::span<const Bit> u) {
    if (u.size() != code.length()) {
        throw InvalidInput("polar_encode: expected " + std::to_string(code.length()) + " bits, got " +
                           std::to_string(u.size()));
    }
    for (auto f : code.frozen_set()) {
        if (u[f] != 0) {
            throw InvalidInput("polar_encode: frozen bit " + std::to_string(f) + " is nonzero");
        }
    }
    BitVector x(u.begin(), u.end());
    detail::butterfly_in_place(x);
    return x;
}

/// u = x * G_N, using G_N^{-1} = G_N over GF(2). No frozen-bit check.
inline BitVector polar_invert(const PolarCode& code, std::span<const Bit> x) {
    if (x.size() != code.length()) {
        throw InvalidInput("polar_invert: expected " + std::to_string(code.length()) + " bits, got " +
                           std::to_string(x.size()));
    }
    BitVector u(x.begin(), x.end());
    detail::butterfly_in_place(u);
    return u;
}

/// Places information pattern `pattern` onto the info set: bit j of the
/// pattern goes to info position j.
inline BitVector info_pattern_to_u(const PolarCode& code, std::uint64_t pattern) {
    BitVector u(code.length(), 0);
    const auto& info = code.info_set();
    for (std::size_t j = 0; j < info.size(); ++j) {
        u[info[j]] = static_cast<Bit>((pattern >> j) & 1u);
    }
    return u;
}

inline BitVector u_to_info_bits(const PolarCode& code, std::span<const Bit> u) {
    BitVector out;
    out.reserve(code.dimension());
    for (auto i : code.info_set()) {
        out.push_back(u[i]);
    }
    return out;
}

/// All 2^K codewords, ordered by information pattern index.
inline std::vector<BitVector> enumerate_valid_codewords(const PolarCode& code, unsigned cap = kEnumerationCap) {
    if (code.dimension() > cap) {
        throw ResourceLimit("enumerate_valid_codewords: K = " + std::to_string(code.dimension()) +
                            " exceeds cap " + std::to_string(cap));
    }
    const std::uint64_t count = std::uint64_t{1} << code.dimension();
    std::vector<BitVector> out;
    out.reserve(count);
    for (std::uint64_t p = 0; p < count; ++p) {
        out.push_back(polar_encode(code, info_pattern_to_u(code, p)));
    }
    return out;
}

}  // namespace gaspolar
