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

#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gaspolar/common.hpp"

namespace gaspolar {

/// (4^M - 1) / 3: mean squared level of the unnormalized {+-1, +-3, ...} PAM.
inline double scaling_factor(int bits_per_symbol) {
    if (bits_per_symbol < 1) {
        throw InvalidParameter("scaling_factor requires M >= 1");
    }
    if (bits_per_symbol > 30) {
        throw InvalidParameter("scaling_factor: M too large");
    }
    return (std::ldexp(1.0, 2 * bits_per_symbol) - 1.0) / 3.0;
}

/// Real-axis 2^M-PAM (M = 1 is BPSK) with unit average symbol energy.
class ModulationScheme {
   public:
    explicit ModulationScheme(int bits_per_symbol) : bits_(bits_per_symbol), scale_(scaling_factor(bits_per_symbol)) {}

    int bits_per_symbol() const { return bits_; }
    double scale() const { return scale_; }
    std::size_t order() const { return std::size_t{1} << bits_; }

    /// "bpsk", "pam4", "pam16", "pam2^3" ...
    std::string name() const { return bits_ == 1 ? std::string("bpsk") : "pam" + std::to_string(order()); }

    /// Accepts bpsk, pam<2^M>, pam2^<M>.
    static ModulationScheme parse(const std::string& text) {
        if (text == "bpsk") {
            return ModulationScheme(1);
        }
        if (text.rfind("pam", 0) == 0) {
            std::string rest = text.substr(3);
            try {
                if (rest.rfind("2^", 0) == 0) {
                    std::size_t used = 0;
                    int m = std::stoi(rest.substr(2), &used);
                    if (used == rest.size() - 2 && m >= 1 && m <= 16) {
                        return ModulationScheme(m);
                    }
                } else {
                    std::size_t used = 0;
                    unsigned long order = std::stoul(rest, &used);
                    if (used == rest.size() && order >= 2 && is_power_of_two(order) && order <= (1ul << 16)) {
                        return ModulationScheme(static_cast<int>(floor_log2(order)));
                    }
                }
            } catch (const std::exception&) {
            }
        }
        throw InvalidParameter("unknown modulation '" + text + "' (expected bpsk, pam4, pam16, pam2^M)");
    }

    friend bool operator==(const ModulationScheme& a, const ModulationScheme& b) { return a.bits_ == b.bits_; }

   private:
    int bits_;
    double scale_;
};

/// Gray-labelled level: (1/sqrt A) sum_j 2^{M-j-1} (-1)^j prod_{k<=j} (1 - 2 z_k).
inline double gray_pam_map(std::span<const Bit> z, double scale) {
    const std::size_t m = z.size();
    if (m < 1) {
        throw InvalidInput("gray_pam_map: empty label");
    }
    double sum = 0.0;
    double prod = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
        prod *= z[j] ? -1.0 : 1.0;
        double sign = (j % 2 == 0) ? 1.0 : -1.0;
        sum += std::ldexp(1.0, static_cast<int>(m - j - 1)) * sign * prod;
    }
    return sum / std::sqrt(scale);
}

/// Natural-labelled level: each term depends on a single bit.
inline double natural_pam_map(std::span<const Bit> z, double scale) {
    const std::size_t m = z.size();
    if (m < 1) {
        throw InvalidInput("natural_pam_map: empty label");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        double sign = (j % 2 == 0) ? 1.0 : -1.0;
        sum += std::ldexp(1.0, static_cast<int>(m - j - 1)) * sign * (z[j] ? -1.0 : 1.0);
    }
    return sum / std::sqrt(scale);
}

inline double gray_pam_map(std::span<const Bit> z, const ModulationScheme& mod) {
    if (z.size() != static_cast<std::size_t>(mod.bits_per_symbol())) {
        throw InvalidInput("gray_pam_map: label has " + std::to_string(z.size()) + " bits, modulation needs " +
                           std::to_string(mod.bits_per_symbol()));
    }
    return gray_pam_map(z, mod.scale());
}

inline double natural_pam_map(std::span<const Bit> z, const ModulationScheme& mod) {
    if (z.size() != static_cast<std::size_t>(mod.bits_per_symbol())) {
        throw InvalidInput("natural_pam_map: label has " + std::to_string(z.size()) + " bits, modulation needs " +
                           std::to_string(mod.bits_per_symbol()));
    }
    return natural_pam_map(z, mod.scale());
}

/// Cumulative XOR: out_s = z_0 ^ ... ^ z_s. Satisfies natural(out) == gray(z).
inline BitVector gray_to_binary(std::span<const Bit> z) {
    BitVector out(z.size());
    Bit acc = 0;
    for (std::size_t s = 0; s < z.size(); ++s) {
        acc ^= z[s];
        out[s] = acc;
    }
    return out;
}

/// Adjacent XOR; inverse of gray_to_binary.
inline BitVector binary_to_gray(std::span<const Bit> zp) {
    BitVector out(zp.size());
    for (std::size_t s = 0; s < zp.size(); ++s) {
        out[s] = s == 0 ? zp[0] : static_cast<Bit>(zp[s - 1] ^ zp[s]);
    }
    return out;
}

/// AWGN with symbol SNR Es/N0 (Es = 1): per-sample variance N0/2.
struct ChannelModel {
    double snr_db = 0.0;
    double sigma2 = 0.5;

    static ChannelModel from_snr_db(double snr_db) { return {snr_db, std::pow(10.0, -snr_db / 10.0) / 2.0}; }
    static ChannelModel noiseless() { return {INFINITY, 0.0}; }
};

template <class Rng>
std::vector<double> awgn_transmit(std::span<const double> symbols, const ChannelModel& channel, Rng& rng) {
    std::vector<double> y(symbols.begin(), symbols.end());
    if (channel.sigma2 <= 0.0) {
        return y;
    }
    std::normal_distribution<double> noise(0.0, std::sqrt(channel.sigma2));
    for (auto& v : y) {
        v += noise(rng);
    }
    return y;
}

}  // namespace gaspolar
