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
#include <numbers>
#include <string>
#include <vector>

#include "gaspolar/instance.hpp"
#include "gaspolar/polar.hpp"
#include "gaspolar/polynomial.hpp"
#include "gaspolar/statevector.hpp"

// Circuit builders for adaptive Grover search over polar codewords.

namespace gaspolar {

/// Key qubits 0..n_key-1 (one per objective variable), followed by m value
/// qubits, least significant first. The last value qubit is the sign.
struct RegisterLayout {
    unsigned num_key = 0;
    unsigned num_value = 0;

    unsigned total() const { return num_key + num_value; }
    unsigned key_qubit(std::size_t var) const { return static_cast<unsigned>(var); }
    unsigned value_qubit(unsigned t) const { return num_key + t; }
    unsigned sign_qubit() const {
        if (num_value == 0) {
            throw InvalidInput("layout has no value register");
        }
        return num_key + num_value - 1;
    }

    std::vector<unsigned> key_qubits() const {
        std::vector<unsigned> q(num_key);
        for (unsigned i = 0; i < num_key; ++i) q[i] = i;
        return q;
    }

    std::vector<unsigned> value_qubits() const {
        std::vector<unsigned> q(num_value);
        for (unsigned t = 0; t < num_value; ++t) q[t] = num_key + t;
        return q;
    }

    std::uint64_t key_of(std::uint64_t index) const { return index & ((std::uint64_t{1} << num_key) - 1); }
    std::uint64_t value_of(std::uint64_t index) const {
        return (index >> num_key) & ((std::uint64_t{1} << num_value) - 1);
    }

    /// Two's-complement interpretation of a value-register readout.
    std::int64_t signed_value_of(std::uint64_t index) const {
        auto v = static_cast<std::int64_t>(value_of(index));
        if (num_value > 0 && (v >> (num_value - 1)) & 1) {
            v -= std::int64_t{1} << num_value;
        }
        return v;
    }
};

/// Two's complement of v in m bits, as an unsigned register value.
inline std::uint64_t twos_complement(std::int64_t v, unsigned m) {
    const std::uint64_t mask = (std::uint64_t{1} << m) - 1;
    return static_cast<std::uint64_t>(v) & mask;
}

/// QFT|j> = 2^{-m/2} sum_k exp(2 pi i j k / 2^m) |k>, where qubit t of the
/// register carries weight 2^t.
inline Circuit qft(const std::vector<unsigned>& reg, unsigned num_qubits) {
    Circuit c(num_qubits);
    const auto m = static_cast<int>(reg.size());
    for (int t = m - 1; t >= 0; --t) {
        c.add(Gate::h(reg[static_cast<std::size_t>(t)]));
        for (int l = t - 1; l >= 0; --l) {
            double angle = 2.0 * std::numbers::pi / std::ldexp(1.0, t - l + 1);
            c.add(Gate::cphase({reg[static_cast<std::size_t>(l)], reg[static_cast<std::size_t>(t)]}, angle));
        }
    }
    for (int t = 0; t < m / 2; ++t) {
        c.add(Gate::swap(reg[static_cast<std::size_t>(t)], reg[static_cast<std::size_t>(m - 1 - t)]));
    }
    return c;
}

/// Exact inverse QFT (no rotation cut-off).
inline Circuit inverse_qft(const std::vector<unsigned>& reg, unsigned num_qubits) {
    return qft(reg, num_qubits).inverse();
}

inline Circuit inverse_qft(unsigned m) {
    if (m < 1) {
        throw InvalidParameter("inverse_qft requires m >= 1");
    }
    std::vector<unsigned> reg(m);
    for (unsigned t = 0; t < m; ++t) reg[t] = t;
    return inverse_qft(reg, m);
}

/// Superposition over valid (interleaved, optionally transformed) codewords:
///   H on the information positions of every level
///   CNOT butterfly per level
///   SWAPs realizing the interleaver
///   per-symbol CNOT cascade (cumulative XOR) when use_diff and M > 1
inline Circuit prepare_initial_circuit(const PolarCode& code, int levels, bool use_diff, const Interleaver& interleaver,
                                       const RegisterLayout& layout) {
    const std::size_t len = code.length();
    const std::size_t bits = static_cast<std::size_t>(levels) * len;
    if (levels < 1) {
        throw InvalidParameter("levels must be >= 1");
    }
    if (layout.num_key != bits) {
        throw InvalidInput("layout has " + std::to_string(layout.num_key) + " key qubits, need M*N = " +
                           std::to_string(bits));
    }
    if (interleaver.size() != bits) {
        throw InvalidInput("interleaver size must be M*N");
    }
    Circuit c(layout.total());
    auto sched = cnot_schedule(code);
    for (int s = 0; s < levels; ++s) {
        const std::size_t off = static_cast<std::size_t>(s) * len;
        for (auto a : code.info_set()) {
            c.add(Gate::h(layout.key_qubit(off + a)));
        }
    }
    for (int s = 0; s < levels; ++s) {
        const std::size_t off = static_cast<std::size_t>(s) * len;
        for (auto [control, target] : sched.pairs) {
            c.add(Gate::cnot(layout.key_qubit(off + control), layout.key_qubit(off + target)));
        }
    }
    for (auto [a, b] : interleaver.as_swaps()) {
        c.add(Gate::swap(layout.key_qubit(a), layout.key_qubit(b)));
    }
    if (use_diff) {
        for (std::size_t i = 0; i < len; ++i) {
            for (int s = 1; s < levels; ++s) {
                c.add(Gate::cnot(layout.key_qubit(static_cast<std::size_t>(s - 1) * len + i),
                                 layout.key_qubit(static_cast<std::size_t>(s) * len + i)));
            }
        }
    }
    return c;
}

inline Circuit prepare_initial_circuit(const ProblemInstance& inst, bool use_diff, const RegisterLayout& layout) {
    return prepare_initial_circuit(inst.code, inst.levels(), use_diff, inst.interleaver, layout);
}

enum class DictionaryMode {
    /// Quantized integer coefficients; the value register reads E_q(x) - c_q exactly.
    integer,
    /// Coefficients (times 2^f) used directly as phase angles, unrounded.
    real_angle,
};

namespace detail {

/// Phase 2 pi * a * 2^t / 2^m, reduced exactly for integer a.
inline double dictionary_angle(std::int64_t a, unsigned t, unsigned m) {
    const std::uint64_t mask = (std::uint64_t{1} << m) - 1;
    std::uint64_t r = (static_cast<std::uint64_t>(a) << t) & mask;
    return 2.0 * std::numbers::pi * std::ldexp(static_cast<double>(r), -static_cast<int>(m));
}

inline void add_term_phases(Circuit& c, const RegisterLayout& layout, const Monomial& vars, double angle_for_t0,
                            std::int64_t int_coeff, bool exact) {
    for (unsigned t = 0; t < layout.num_value; ++t) {
        double angle = exact ? dictionary_angle(int_coeff, t, layout.num_value)
                             : std::fmod(angle_for_t0 * std::ldexp(1.0, static_cast<int>(t)), 2.0 * std::numbers::pi);
        if (angle == 0.0) {
            continue;
        }
        if (vars.empty()) {
            c.add(Gate::phase(layout.value_qubit(t), angle));
        } else {
            std::vector<unsigned> qs;
            qs.reserve(vars.size() + 1);
            for (auto v : vars) qs.push_back(layout.key_qubit(v));
            qs.push_back(layout.value_qubit(t));
            c.add(Gate::cphase(std::move(qs), angle));
        }
    }
}

}  // namespace detail

/// Encodes E_q(x) - c_q into the value register in two's complement:
///   H on every value qubit
///   per term (S, a) and value qubit t: phase 2 pi a 2^t / 2^m controlled on S
///   constant and -c_q as uncontrolled phases
///   inverse QFT on the value register
/// Throws OverflowError if the interval range of E_q - c_q does not fit m bits.
inline Circuit dictionary_circuit(const QuantizedPolynomial& poly, std::int64_t threshold, const RegisterLayout& layout) {
    if (layout.num_value < 1) {
        throw InvalidParameter("value register must have at least one qubit");
    }
    if (poly.num_vars != layout.num_key) {
        throw InvalidInput("polynomial variable count does not match key register");
    }
    auto [lo, hi] = poly.bounds();
    lo -= threshold;
    hi -= threshold;
    const std::int64_t half = std::int64_t{1} << (layout.num_value - 1);
    if (lo < -half || hi >= half) {
        throw OverflowError("objective range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                            "] does not fit a " + std::to_string(layout.num_value) + "-qubit value register");
    }
    Circuit c(layout.total());
    for (auto q : layout.value_qubits()) {
        c.add(Gate::h(q));
    }
    for (const auto& t : poly.terms) {
        detail::add_term_phases(c, layout, t.vars, 0.0, t.coeff, true);
    }
    detail::add_term_phases(c, layout, {}, 0.0, poly.constant - threshold, true);
    c.append(inverse_qft(layout.value_qubits(), layout.total()));
    return c;
}

/// Real-angle variant: coefficients scaled by 2^f but not rounded. The value
/// register then concentrates near round(E(x) 2^f - c 2^f).
inline Circuit dictionary_circuit_real(const MultilinearPolynomial& poly, double threshold, int scale_bits,
                                       const RegisterLayout& layout) {
    if (layout.num_value < 1) {
        throw InvalidParameter("value register must have at least one qubit");
    }
    if (poly.num_vars() != layout.num_key) {
        throw InvalidInput("polynomial variable count does not match key register");
    }
    const double to_angle = 2.0 * std::numbers::pi * std::ldexp(1.0, scale_bits - static_cast<int>(layout.num_value));
    Circuit c(layout.total());
    for (auto q : layout.value_qubits()) {
        c.add(Gate::h(q));
    }
    double constant = -threshold;
    for (const auto& [vars, coeff] : poly.terms()) {
        if (vars.empty()) {
            constant += coeff;
        } else {
            detail::add_term_phases(c, layout, vars, coeff * to_angle, 0, false);
        }
    }
    detail::add_term_phases(c, layout, {}, constant * to_angle, 0, false);
    c.append(inverse_qft(layout.value_qubits(), layout.total()));
    return c;
}

/// Reflection about |0...0> on every qubit, up to global phase.
inline Circuit diffusion_circuit(const RegisterLayout& layout) {
    Circuit c(layout.total());
    std::vector<unsigned> all(layout.total());
    for (unsigned q = 0; q < layout.total(); ++q) {
        all[q] = q;
        c.add(Gate::x(q));
    }
    c.add(Gate::mcz(all));
    for (unsigned q = 0; q < layout.total(); ++q) {
        c.add(Gate::x(q));
    }
    return c;
}

/// G = A D A^H O, as a gate list applied left to right: O, A^H, D, A.
/// O is a Z on the sign qubit.
inline Circuit grover_operator(const Circuit& prepare, const RegisterLayout& layout) {
    Circuit g(layout.total());
    g.add(Gate::z(layout.sign_qubit()));
    g.append(prepare.inverse());
    g.append(diffusion_circuit(layout));
    g.append(prepare);
    return g;
}

}  // namespace gaspolar
