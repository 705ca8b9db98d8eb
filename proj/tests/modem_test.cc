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

#include "gaspolar/modem.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "test_util.h"

using namespace gaspolar;

namespace {

BitVector pattern(std::uint64_t v, int m) { return unpack_bits(v, static_cast<std::size_t>(m)); }

int hamming(const BitVector& a, const BitVector& b) {
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

}  // namespace

TEST(modem, scaling_factor_matches_mean_level_energy) {
    ASSERT_DOUBLE_EQ(scaling_factor(1), 1.0);
    ASSERT_DOUBLE_EQ(scaling_factor(2), 5.0);
    ASSERT_DOUBLE_EQ(scaling_factor(4), 85.0);
    ASSERT_THROW(scaling_factor(0), InvalidParameter);
    // Oracle: average of squared unnormalized levels {+-1, +-3, ...}.
    for (int m = 1; m <= 8; ++m) {
        double acc = 0.0;
        const int order = 1 << m;
        for (int l = 0; l < order; ++l) {
            double level = 2.0 * l - (order - 1);
            acc += level * level;
        }
        ASSERT_NEAR(scaling_factor(m), acc / order, 1e-9) << "M=" << m;
    }
}

TEST(modem, gray_pam_map_examples) {
    ModulationScheme bpsk(1);
    ASSERT_DOUBLE_EQ(gray_pam_map(BitVector{0}, bpsk), 1.0);
    ASSERT_DOUBLE_EQ(gray_pam_map(BitVector{1}, bpsk), -1.0);

    ModulationScheme pam4(2);
    const double r5 = std::sqrt(5.0);
    ASSERT_NEAR(gray_pam_map(BitVector{0, 0}, pam4), 1.0 / r5, 1e-15);
    ASSERT_NEAR(gray_pam_map(BitVector{0, 1}, pam4), 3.0 / r5, 1e-15);
    ASSERT_NEAR(gray_pam_map(BitVector{1, 1}, pam4), -3.0 / r5, 1e-15);
    ASSERT_NEAR(gray_pam_map(BitVector{1, 0}, pam4), -1.0 / r5, 1e-15);

    ModulationScheme pam8(3);
    ASSERT_NEAR(gray_pam_map(BitVector{1, 0, 0}, pam8), -3.0 / std::sqrt(21.0), 1e-15);
    ASSERT_THROW(gray_pam_map(BitVector{1, 0}, pam8), InvalidInput);
}

TEST(modem, natural_pam_map_examples) {
    ModulationScheme pam4(2);
    const double r5 = std::sqrt(5.0);
    ASSERT_NEAR(natural_pam_map(BitVector{0, 0}, pam4), 1.0 / r5, 1e-15);
    ASSERT_NEAR(natural_pam_map(BitVector{0, 1}, pam4), 3.0 / r5, 1e-15);
    ASSERT_NEAR(natural_pam_map(BitVector{1, 0}, pam4), -3.0 / r5, 1e-15);
    ASSERT_NEAR(natural_pam_map(BitVector{1, 1}, pam4), -1.0 / r5, 1e-15);
    ASSERT_DOUBLE_EQ(natural_pam_map(BitVector{1}, ModulationScheme(1)), -1.0);
    ASSERT_NEAR(natural_pam_map(BitVector{1, 1, 1}, ModulationScheme(3)), -3.0 / std::sqrt(21.0), 1e-15);
    ASSERT_THROW(natural_pam_map(BitVector{1, 1, 1}, pam4), InvalidInput);
}

TEST(modem, gray_map_agrees_with_longhand_formula) {
    for (int m = 1; m <= 6; ++m) {
        ModulationScheme mod(m);
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << m); ++v) {
            auto z = pattern(v, m);
            ASSERT_NEAR(gray_pam_map(z, mod), test_util::gray_level_unnormalized(z) / std::sqrt(mod.scale()), 1e-13);
        }
    }
}

TEST(modem, bit_transforms) {
    ASSERT_EQ(gray_to_binary(BitVector{1, 1}), (BitVector{1, 0}));
    ASSERT_EQ(gray_to_binary(BitVector{0, 0, 0, 0}), (BitVector{0, 0, 0, 0}));
    ASSERT_EQ(gray_to_binary(BitVector{1, 0, 0}), (BitVector{1, 1, 1}));
    ASSERT_EQ(binary_to_gray(BitVector{1, 0}), (BitVector{1, 1}));
    ASSERT_EQ(binary_to_gray(BitVector{1, 1, 1}), (BitVector{1, 0, 0}));
}

TEST(modem, transforms_are_inverse_bijections) {
    for (int m = 1; m <= 6; ++m) {
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << m); ++v) {
            auto z = pattern(v, m);
            ASSERT_EQ(binary_to_gray(gray_to_binary(z)), z);
            ASSERT_EQ(gray_to_binary(binary_to_gray(z)), z);
        }
    }
}

TEST(modem, natural_of_transformed_equals_gray) {
    for (int m = 1; m <= 6; ++m) {
        ModulationScheme mod(m);
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << m); ++v) {
            auto z = pattern(v, m);
            // Both sides are sums of exactly representable values over sqrt(A).
            ASSERT_EQ(natural_pam_map(gray_to_binary(z), mod), gray_pam_map(z, mod)) << "M=" << m << " z=" << v;
        }
    }
}

TEST(modem, gray_labelling_and_unit_energy) {
    for (int m = 1; m <= 6; ++m) {
        ModulationScheme mod(m);
        std::vector<std::pair<double, BitVector>> levels;
        double energy = 0.0;
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << m); ++v) {
            auto z = pattern(v, m);
            double s = gray_pam_map(z, mod);
            energy += s * s;
            levels.emplace_back(s, z);
        }
        ASSERT_NEAR(energy / static_cast<double>(levels.size()), 1.0, 1e-12);
        std::sort(levels.begin(), levels.end());
        for (std::size_t i = 1; i < levels.size(); ++i) {
            ASSERT_LT(levels[i - 1].first, levels[i].first);
            ASSERT_EQ(hamming(levels[i - 1].second, levels[i].second), 1);
        }
    }
}

TEST(modem, parse_modulation_names) {
    ASSERT_EQ(ModulationScheme::parse("bpsk").bits_per_symbol(), 1);
    ASSERT_EQ(ModulationScheme::parse("pam4").bits_per_symbol(), 2);
    ASSERT_EQ(ModulationScheme::parse("pam16").bits_per_symbol(), 4);
    ASSERT_EQ(ModulationScheme::parse("pam2^3").bits_per_symbol(), 3);
    ASSERT_EQ(ModulationScheme::parse("pam16").name(), "pam16");
    ASSERT_THROW(ModulationScheme::parse("pam6"), InvalidParameter);
    ASSERT_THROW(ModulationScheme::parse("qam16"), InvalidParameter);
    ASSERT_THROW(ModulationScheme::parse("pam"), InvalidParameter);
}

TEST(modem, channel_snr_convention) {
    auto ch = ChannelModel::from_snr_db(10.0);
    ASSERT_NEAR(ch.sigma2, 0.05, 1e-15);
    ASSERT_NEAR(ChannelModel::from_snr_db(0.0).sigma2, 0.5, 1e-15);
}

TEST(modem, awgn_noiseless_is_identity) {
    std::vector<double> s{1.0, -1.0, 0.25, 3.0};
    std::mt19937_64 rng(1);
    ASSERT_EQ(awgn_transmit(s, ChannelModel::noiseless(), rng), s);
}

TEST(modem, awgn_statistics) {
    const std::size_t n = 1'000'000;
    std::vector<double> s(n, 0.5);
    auto ch = ChannelModel::from_snr_db(3.0);
    std::mt19937_64 rng(2024);
    auto y = awgn_transmit(s, ch, rng);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += y[i] - s[i];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += (y[i] - s[i] - mean) * (y[i] - s[i] - mean);
    var /= static_cast<double>(n - 1);
    ASSERT_NEAR(mean, 0.0, 5e-3);
    ASSERT_NEAR(var / ch.sigma2, 1.0, 0.01);

    std::mt19937_64 again(2024);
    ASSERT_EQ(awgn_transmit(s, ch, again), y);
}
