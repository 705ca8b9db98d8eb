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
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gaspolar/common.hpp"

// Dense statevector simulator. Qubit j is bit j of the basis-state index.

namespace gaspolar {

using Amplitude = std::complex<double>;

inline constexpr unsigned kMaxQubits = 26;

enum class GateKind { H, X, Z, CNOT, SWAP, PHASE, CPHASE, MCZ };

inline const char* gate_name(GateKind k) {
    switch (k) {
        case GateKind::H: return "H";
        case GateKind::X: return "X";
        case GateKind::Z: return "Z";
        case GateKind::CNOT: return "CNOT";
        case GateKind::SWAP: return "SWAP";
        case GateKind::PHASE: return "PHASE";
        case GateKind::CPHASE: return "CPHASE";
        case GateKind::MCZ: return "MCZ";
    }
    return "?";
}

/// Qubit roles:
///   H, X, Z, PHASE: qubits = {target}
///   CNOT: {control, target}
///   SWAP: {a, b}
///   CPHASE, MCZ: every listed qubit; the phase applies when all are |1>
///   (symmetric, so no control/target distinction).
struct Gate {
    GateKind kind;
    std::vector<unsigned> qubits;
    double theta = 0.0;

    static Gate h(unsigned q) { return {GateKind::H, {q}}; }
    static Gate x(unsigned q) { return {GateKind::X, {q}}; }
    static Gate z(unsigned q) { return {GateKind::Z, {q}}; }
    static Gate cnot(unsigned c, unsigned t) { return {GateKind::CNOT, {c, t}}; }
    static Gate swap(unsigned a, unsigned b) { return {GateKind::SWAP, {a, b}}; }
    static Gate phase(unsigned q, double theta) { return {GateKind::PHASE, {q}, theta}; }
    static Gate cphase(std::vector<unsigned> qs, double theta) { return {GateKind::CPHASE, std::move(qs), theta}; }
    static Gate mcz(std::vector<unsigned> qs) { return {GateKind::MCZ, std::move(qs)}; }

    Gate inverse() const {
        Gate g = *this;
        if (kind == GateKind::PHASE || kind == GateKind::CPHASE) {
            g.theta = -theta;
        }
        return g;
    }

    friend bool operator==(const Gate&, const Gate&) = default;
};

class Circuit {
   public:
    Circuit() = default;
    explicit Circuit(unsigned num_qubits) : num_qubits_(num_qubits) {}

    unsigned num_qubits() const { return num_qubits_; }
    const std::vector<Gate>& gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }

    Circuit& add(Gate g) {
        validate(g);
        gates_.push_back(std::move(g));
        return *this;
    }

    Circuit& append(const Circuit& other) {
        if (other.num_qubits_ > num_qubits_) {
            throw InvalidInput("appending a wider circuit");
        }
        gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
        return *this;
    }

    /// Gate-wise adjoint: reversed order, negated phases.
    Circuit inverse() const {
        Circuit out(num_qubits_);
        out.gates_.reserve(gates_.size());
        for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
            out.gates_.push_back(it->inverse());
        }
        return out;
    }

    std::size_t count(GateKind k) const {
        return static_cast<std::size_t>(std::count_if(gates_.begin(), gates_.end(), [k](const Gate& g) { return g.kind == k; }));
    }

    /// One line per gate: "NAME q0 [q1 ...] [theta]".
    void dump(std::ostream& os) const {
        os << std::setprecision(17);
        for (const auto& g : gates_) {
            os << gate_name(g.kind);
            for (auto q : g.qubits) {
                os << ' ' << q;
            }
            if (g.kind == GateKind::PHASE || g.kind == GateKind::CPHASE) {
                os << ' ' << g.theta;
            }
            os << '\n';
        }
    }

    std::string to_text() const {
        std::ostringstream ss;
        dump(ss);
        return ss.str();
    }

    static Circuit parse(std::istream& is, unsigned num_qubits) {
        Circuit c(num_qubits);
        std::string line;
        while (std::getline(is, line)) {
            std::istringstream ls(line);
            std::string name;
            if (!(ls >> name)) {
                continue;
            }
            std::vector<std::string> args;
            for (std::string a; ls >> a;) {
                args.push_back(a);
            }
            Gate g{GateKind::H, {}};
            bool has_theta = false;
            if (name == "H") g.kind = GateKind::H;
            else if (name == "X") g.kind = GateKind::X;
            else if (name == "Z") g.kind = GateKind::Z;
            else if (name == "CNOT") g.kind = GateKind::CNOT;
            else if (name == "SWAP") g.kind = GateKind::SWAP;
            else if (name == "MCZ") g.kind = GateKind::MCZ;
            else if (name == "PHASE") { g.kind = GateKind::PHASE; has_theta = true; }
            else if (name == "CPHASE") { g.kind = GateKind::CPHASE; has_theta = true; }
            else throw InvalidInput("unknown gate '" + name + "'");
            if (has_theta) {
                if (args.empty()) {
                    throw InvalidInput("missing angle for " + name);
                }
                g.theta = std::stod(args.back());
                args.pop_back();
            }
            for (const auto& a : args) {
                g.qubits.push_back(static_cast<unsigned>(std::stoul(a)));
            }
            c.add(std::move(g));
        }
        return c;
    }

   private:
    void validate(const Gate& g) const {
        std::size_t want = 0;
        switch (g.kind) {
            case GateKind::H:
            case GateKind::X:
            case GateKind::Z:
            case GateKind::PHASE: want = 1; break;
            case GateKind::CNOT:
            case GateKind::SWAP: want = 2; break;
            case GateKind::CPHASE:
            case GateKind::MCZ: want = 0; break;
        }
        if (want != 0 && g.qubits.size() != want) {
            throw InvalidInput(std::string(gate_name(g.kind)) + " expects " + std::to_string(want) + " qubits");
        }
        if (g.qubits.empty()) {
            throw InvalidInput(std::string(gate_name(g.kind)) + " without qubits");
        }
        for (auto q : g.qubits) {
            if (q >= num_qubits_) {
                throw InvalidInput("gate qubit " + std::to_string(q) + " out of range for " +
                                   std::to_string(num_qubits_) + "-qubit circuit");
            }
        }
        std::vector<unsigned> sorted = g.qubits;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw InvalidInput(std::string(gate_name(g.kind)) + " with repeated qubit");
        }
        if (!std::isfinite(g.theta)) {
            throw InvalidInput("non-finite gate angle");
        }
    }

    unsigned num_qubits_ = 0;
    std::vector<Gate> gates_;
};

class StateVector {
   public:
    /// |0...0> on num_qubits qubits.
    explicit StateVector(unsigned num_qubits) : num_qubits_(num_qubits) {
        if (num_qubits > kMaxQubits) {
            throw ResourceLimit("statevector of " + std::to_string(num_qubits) + " qubits exceeds cap of " +
                                std::to_string(kMaxQubits));
        }
        amps_.assign(std::size_t{1} << num_qubits, Amplitude{0.0, 0.0});
        amps_[0] = 1.0;
    }

    static StateVector basis(unsigned num_qubits, std::uint64_t index) {
        StateVector s(num_qubits);
        if (index >= s.amps_.size()) {
            throw InvalidInput("basis index out of range");
        }
        s.amps_[0] = 0.0;
        s.amps_[index] = 1.0;
        return s;
    }

    static StateVector from_amplitudes(std::vector<Amplitude> amps) {
        if (!is_power_of_two(amps.size())) {
            throw InvalidInput("amplitude count must be a power of two");
        }
        StateVector s(floor_log2(amps.size()));
        s.amps_ = std::move(amps);
        return s;
    }

    unsigned num_qubits() const { return num_qubits_; }
    std::size_t dimension() const { return amps_.size(); }
    const std::vector<Amplitude>& amplitudes() const { return amps_; }
    Amplitude operator[](std::size_t i) const { return amps_[i]; }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& a : amps_) {
            s += std::norm(a);
        }
        return s;
    }

    void apply(const Gate& g) {
        for (auto q : g.qubits) {
            if (q >= num_qubits_) {
                throw InvalidInput("gate qubit " + std::to_string(q) + " out of range");
            }
        }
        const std::size_t dim = amps_.size();
        switch (g.kind) {
            case GateKind::H: {
                const std::size_t bit = std::size_t{1} << g.qubits[0];
                const double r = std::numbers::sqrt2 / 2.0;
                for (std::size_t i = 0; i < dim; ++i) {
                    if (i & bit) continue;
                    Amplitude a = amps_[i];
                    Amplitude b = amps_[i | bit];
                    amps_[i] = (a + b) * r;
                    amps_[i | bit] = (a - b) * r;
                }
                break;
            }
            case GateKind::X: {
                const std::size_t bit = std::size_t{1} << g.qubits[0];
                for (std::size_t i = 0; i < dim; ++i) {
                    if (!(i & bit)) std::swap(amps_[i], amps_[i | bit]);
                }
                break;
            }
            case GateKind::Z: {
                const std::size_t bit = std::size_t{1} << g.qubits[0];
                for (std::size_t i = 0; i < dim; ++i) {
                    if (i & bit) amps_[i] = -amps_[i];
                }
                break;
            }
            case GateKind::CNOT: {
                const std::size_t cbit = std::size_t{1} << g.qubits[0];
                const std::size_t tbit = std::size_t{1} << g.qubits[1];
                for (std::size_t i = 0; i < dim; ++i) {
                    if ((i & cbit) && !(i & tbit)) std::swap(amps_[i], amps_[i | tbit]);
                }
                break;
            }
            case GateKind::SWAP: {
                const std::size_t abit = std::size_t{1} << g.qubits[0];
                const std::size_t bbit = std::size_t{1} << g.qubits[1];
                for (std::size_t i = 0; i < dim; ++i) {
                    if ((i & abit) && !(i & bbit)) std::swap(amps_[i], amps_[(i & ~abit) | bbit]);
                }
                break;
            }
            case GateKind::PHASE:
            case GateKind::CPHASE:
            case GateKind::MCZ: {
                const Amplitude factor =
                    g.kind == GateKind::MCZ ? Amplitude{-1.0, 0.0} : std::polar(1.0, g.theta);
                apply_diagonal_on_ones(g.qubits, factor);
                break;
            }
        }
    }

    void apply(const Circuit& c) {
        if (c.num_qubits() > num_qubits_) {
            throw InvalidInput("circuit wider than state");
        }
        for (const auto& g : c.gates()) {
            apply(g);
        }
    }

    std::vector<double> probabilities() const {
        std::vector<double> p(amps_.size());
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            p[i] = std::norm(amps_[i]);
        }
        return p;
    }

    /// CSV rows "index,re,im".
    void write_csv(std::ostream& os) const {
        os << "index,re,im\n" << std::setprecision(17);
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            os << i << ',' << amps_[i].real() << ',' << amps_[i].imag() << '\n';
        }
    }

   private:
    /// Multiplies every amplitude whose index has all `qubits` set.
    void apply_diagonal_on_ones(const std::vector<unsigned>& qubits, Amplitude factor) {
        std::vector<unsigned> sorted = qubits;
        std::sort(sorted.begin(), sorted.end());
        std::size_t mask = 0;
        for (auto q : sorted) mask |= std::size_t{1} << q;
        const std::size_t free_count = amps_.size() >> sorted.size();
        for (std::size_t k = 0; k < free_count; ++k) {
            // Spread k over the free bit positions, then force the fixed ones.
            std::size_t idx = k;
            for (auto q : sorted) {
                std::size_t low = idx & ((std::size_t{1} << q) - 1);
                idx = ((idx >> q) << (q + 1)) | low;
            }
            amps_[idx | mask] *= factor;
        }
    }

    unsigned num_qubits_;
    std::vector<Amplitude> amps_;
};

/// Result of a full computational-basis measurement.
struct Measurement {
    std::uint64_t index = 0;
};

template <class Rng>
Measurement measure_all(const StateVector& state, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double r = unit(rng) * state.norm_squared();
    const auto& amps = state.amplitudes();
    double acc = 0.0;
    std::size_t last_nonzero = 0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        double p = std::norm(amps[i]);
        if (p > 0.0) {
            last_nonzero = i;
        }
        acc += p;
        if (r < acc) {
            return {i};
        }
    }
    return {last_nonzero};
}

/// Inverse-CDF sampler over a fixed probability table; repeated draws without
/// rescanning the state.
class BasisSampler {
   public:
    explicit BasisSampler(const std::vector<double>& probs) : cdf_(probs.size()) {
        double acc = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            acc += probs[i];
            cdf_[i] = acc;
        }
        total_ = acc;
    }

    template <class Rng>
    std::uint64_t operator()(Rng& rng) const {
        std::uniform_real_distribution<double> unit(0.0, total_);
        double r = unit(rng);
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), r);
        if (it == cdf_.end()) {
            // r == total_ after rounding; take the last index with mass.
            auto last = std::find_if(cdf_.rbegin(), cdf_.rend(), [&](double c) { return c < total_; });
            return static_cast<std::uint64_t>(cdf_.rend() - last);
        }
        return static_cast<std::uint64_t>(it - cdf_.begin());
    }

   private:
    std::vector<double> cdf_;
    double total_ = 0.0;
};

}  // namespace gaspolar
