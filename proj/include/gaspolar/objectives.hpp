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
#include <cstdint>
#include <span>
#include <vector>

#include "gaspolar/modem.hpp"
#include "gaspolar/polar.hpp"
#include "gaspolar/polynomial.hpp"

// Objective constructions. Multi-level variables use the layout
// x_{s,i} -> s * N + i (level s, symbol i).

namespace gaspolar {

inline std::uint32_t level_var(std::size_t level, std::size_t symbol, std::size_t symbols) {
    return static_cast<std::uint32_t>(level * symbols + symbol);
}

/// sum_i |y_i - (1 - 2 x_i)|^2 = sum_i (y_i - 1)^2 + sum_i 4 y_i x_i.
inline MultilinearPolynomial bpsk_full_objective(std::span<const double> y) {
    MultilinearPolynomial p(y.size());
    double constant = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        constant += (y[i] - 1.0) * (y[i] - 1.0);
        p.add_term({static_cast<std::uint32_t>(i)}, 4.0 * y[i]);
    }
    p.add_term({}, constant);
    return p;
}

/// sum_i y_i x_i; the full objective is constant + 4 times this.
inline MultilinearPolynomial bpsk_simplified_objective(std::span<const double> y) {
    MultilinearPolynomial p(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        p.add_term({static_cast<std::uint32_t>(i)}, y[i]);
    }
    return p;
}

namespace detail {

/// Gray level S_G(z_i) as a polynomial in the symbol's M variables.
inline MultilinearPolynomial gray_level_polynomial(std::size_t num_vars, std::size_t symbol, std::size_t symbols,
                                                   int bits) {
    const double inv_root = 1.0 / std::sqrt(scaling_factor(bits));
    MultilinearPolynomial level(num_vars);
    auto prod = MultilinearPolynomial::constant(num_vars, 1.0);
    for (int j = 0; j < bits; ++j) {
        auto flip = MultilinearPolynomial::constant(num_vars, 1.0) +
                    MultilinearPolynomial::variable(num_vars, level_var(j, symbol, symbols), -2.0);
        prod = prod * flip;
        double weight = std::ldexp(1.0, bits - j - 1) * (j % 2 == 0 ? 1.0 : -1.0) * inv_root;
        level += prod * weight;
    }
    return level;
}

/// Natural level S_N(z'_i): degree one.
inline MultilinearPolynomial natural_level_polynomial(std::size_t num_vars, std::size_t symbol, std::size_t symbols,
                                                      int bits) {
    const double inv_root = 1.0 / std::sqrt(scaling_factor(bits));
    MultilinearPolynomial level(num_vars);
    for (int j = 0; j < bits; ++j) {
        double weight = std::ldexp(1.0, bits - j - 1) * (j % 2 == 0 ? 1.0 : -1.0) * inv_root;
        level.add_term({}, weight);
        level.add_term({level_var(j, symbol, symbols)}, -2.0 * weight);
    }
    return level;
}

/// sum_i (y_i - S(z_i))^2 for a per-symbol level polynomial S.
template <class LevelFn>
MultilinearPolynomial squared_distance_objective(std::span<const double> y, int bits, LevelFn level_fn) {
    if (bits < 1) {
        throw InvalidParameter("bits per symbol must be >= 1");
    }
    const std::size_t symbols = y.size();
    const std::size_t num_vars = symbols * static_cast<std::size_t>(bits);
    MultilinearPolynomial total(num_vars);
    for (std::size_t i = 0; i < symbols; ++i) {
        auto level = level_fn(num_vars, i, symbols, bits);
        total += MultilinearPolynomial::constant(num_vars, y[i] * y[i]);
        total += level * (-2.0 * y[i]);
        total += level * level;
    }
    total.prune(1e-12);
    return total;
}

}  // namespace detail

/// Distance to Gray-labelled 2^M-PAM symbols; degree M.
inline MultilinearPolynomial gray_hubo_objective(std::span<const double> y, int bits_per_symbol) {
    return detail::squared_distance_objective(y, bits_per_symbol, detail::gray_level_polynomial);
}

/// Distance to natural-labelled symbols over the cumulative-XOR variables; degree 2.
inline MultilinearPolynomial natural_qubo_objective(std::span<const double> y, int bits_per_symbol) {
    return detail::squared_distance_objective(y, bits_per_symbol, detail::natural_level_polynomial);
}

struct KasiWeights {
    double encoding = 1.0;
    double frozen = 4.0;
    double receiver = 1.0;

    /// (1, 4, 2 - R) with R the rate of the decoded block.
    static KasiWeights defaults(const PolarCode& code) { return {1.0, 4.0, 2.0 - code.rate()}; }
};

/// Constraint-based QUBO over input bits, XOR outputs and carries.
struct KasiQubo {
    MultilinearPolynomial objective;
    MultilinearPolynomial encoding_penalty;  // W_E * sum C_E, already included in objective
    std::vector<std::uint32_t> input_vars;   // b for u
    std::vector<std::uint32_t> output_vars;  // b for x (codeword layer)
    std::size_t num_xor_gates = 0;
};

/// Variables: 0..N-1 are the input layer; XOR gate k of the CNOT schedule owns
/// N + 2k (its XOR output, which becomes the target wire's new variable) and
/// N + 2k + 1 (its carry). Total N (log2 N + 1).
inline KasiQubo kasi_qubo(const PolarCode& code, std::span<const double> y, const KasiWeights& weights) {
    const std::size_t len = code.length();
    if (len > 8) {
        throw ResourceLimit("kasi_qubo is limited to N <= 8");
    }
    if (y.size() != len) {
        throw InvalidInput("kasi_qubo: received vector length must equal N");
    }
    auto sched = cnot_schedule(code);
    const std::size_t num_vars = len + 2 * sched.pairs.size();

    KasiQubo out;
    out.objective = MultilinearPolynomial(num_vars);
    out.encoding_penalty = MultilinearPolynomial(num_vars);
    out.num_xor_gates = sched.pairs.size();

    std::vector<std::uint32_t> wire(len);
    for (std::size_t i = 0; i < len; ++i) {
        wire[i] = static_cast<std::uint32_t>(i);
        out.input_vars.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::size_t k = 0; k < sched.pairs.size(); ++k) {
        auto [control, target] = sched.pairs[k];
        auto xor_var = static_cast<std::uint32_t>(len + 2 * k);
        auto carry_var = xor_var + 1;
        // (b_i + b_j - a_k - 2 a_{k+1})^2
        MultilinearPolynomial lin(num_vars);
        lin.add_term({wire[control]}, 1.0);
        lin.add_term({wire[target]}, 1.0);
        lin.add_term({xor_var}, -1.0);
        lin.add_term({carry_var}, -2.0);
        out.encoding_penalty += (lin * lin) * weights.encoding;
        wire[target] = xor_var;
    }
    out.output_vars = wire;

    out.objective += out.encoding_penalty;
    for (auto f : code.frozen_set()) {
        out.objective.add_term({static_cast<std::uint32_t>(f)}, weights.frozen);
    }
    for (std::size_t i = 0; i < len; ++i) {
        out.objective.add_term({wire[i]}, weights.receiver * y[i]);
    }
    return out;
}

}  // namespace gaspolar
