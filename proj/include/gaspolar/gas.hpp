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
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "gaspolar/baselines.hpp"
#include "gaspolar/circuits.hpp"
#include "gaspolar/instance.hpp"
#include "gaspolar/polynomial.hpp"
#include "gaspolar/statevector.hpp"

namespace gaspolar {

using Rng = std::mt19937_64;

enum class BackendKind { statevector, analytic };

inline const char* backend_name(BackendKind b) { return b == BackendKind::statevector ? "statevector" : "analytic"; }

inline BackendKind parse_backend(const std::string& s) {
    if (s == "statevector") return BackendKind::statevector;
    if (s == "analytic") return BackendKind::analytic;
    throw InvalidParameter("unknown backend '" + s + "' (expected statevector or analytic)");
}

struct GasConfig {
    double lambda = 8.0 / 7.0;
    BackendKind backend = BackendKind::analytic;
    /// 0 selects 10 * sqrt(2^{MK}).
    std::size_t max_classical_iterations = 0;
    /// Consecutive non-improving measurements, counted once k is saturated.
    std::size_t patience = 30;
    /// Value-register width; 0 selects the smallest safe width.
    int m = 0;
    int scale_bits = 8;
    /// Use the degree-2 natural-label objective (and the XOR cascade) for M > 1.
    bool use_diff = true;
    DictionaryMode dictionary_mode = DictionaryMode::integer;
};

/// floor((pi / 4) sqrt(size)).
inline std::size_t optimal_iterations(std::uint64_t search_space_size) {
    if (search_space_size < 1) {
        throw InvalidParameter("search space size must be >= 1");
    }
    return static_cast<std::size_t>(std::floor(std::numbers::pi / 4.0 * std::sqrt(static_cast<double>(search_space_size))));
}

/// Uniform over {0, 1, ..., ceil(k - 1)}.
template <class R>
std::size_t sample_rotation_count(double k, R& rng) {
    if (!(k >= 1.0)) {
        throw InvalidParameter("rotation bound k must be >= 1");
    }
    auto hi = static_cast<std::size_t>(std::ceil(k - 1.0));
    std::uniform_int_distribution<std::size_t> dist(0, hi);
    return dist(rng);
}

/// Grover success probability sin^2((2L + 1) asin(sqrt(t / S))).
inline double grover_success_probability(std::uint64_t marked, std::uint64_t total, std::size_t rotations) {
    if (total == 0) return 0.0;
    double theta = std::asin(std::sqrt(static_cast<double>(marked) / static_cast<double>(total)));
    double s = std::sin((2.0 * static_cast<double>(rotations) + 1.0) * theta);
    return s * s;
}

/// Everything about an instance the search needs, computed once: the
/// objective, its quantized form and its value on every valid assignment.
class SearchProblem {
   public:
    SearchProblem(const ProblemInstance& inst, bool use_diff, int scale_bits)
        : inst_(inst),
          use_diff_(use_diff && inst.levels() > 1),
          objective_(decoder_objective(inst, use_diff_)),
          quantized_(quantize(objective_, scale_bits)),
          compiled_(quantized_),
          space_(inst, use_diff_) {
        values_.resize(space_.size());
        for (std::size_t c = 0; c < space_.size(); ++c) {
            values_[c] = compiled_.evaluate(space_.key(c));
            by_key_.emplace(space_.key(c), c);
        }
        order_.resize(space_.size());
        for (std::size_t c = 0; c < order_.size(); ++c) order_[c] = c;
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return values_[a] < values_[b]; });
        sorted_values_.resize(order_.size());
        for (std::size_t r = 0; r < order_.size(); ++r) sorted_values_[r] = values_[order_[r]];
    }

    const ProblemInstance& instance() const { return inst_; }
    bool use_diff() const { return use_diff_; }
    const MultilinearPolynomial& objective() const { return objective_; }
    const QuantizedPolynomial& quantized() const { return quantized_; }
    const ValidSpace& space() const { return space_; }
    std::size_t size() const { return space_.size(); }
    double sqrt_size() const { return std::sqrt(static_cast<double>(space_.size())); }

    std::int64_t value(std::size_t candidate) const { return values_[candidate]; }
    std::int64_t evaluate_key(std::uint64_t packed_key) const { return compiled_.evaluate(packed_key); }

    /// Candidate index of a packed key, if the key is a valid assignment.
    std::optional<std::size_t> candidate_of(std::uint64_t packed_key) const {
        auto it = by_key_.find(packed_key);
        if (it == by_key_.end()) return std::nullopt;
        return it->second;
    }

    /// Number of valid assignments with E_q < threshold.
    std::size_t marked_count(std::int64_t threshold) const {
        return static_cast<std::size_t>(std::lower_bound(sorted_values_.begin(), sorted_values_.end(), threshold) -
                                        sorted_values_.begin());
    }

    /// Candidate with rank r in ascending E_q order.
    std::size_t ranked(std::size_t r) const { return order_[r]; }

    std::int64_t min_value() const { return sorted_values_.front(); }

   private:
    ProblemInstance inst_;
    bool use_diff_;
    MultilinearPolynomial objective_;
    QuantizedPolynomial quantized_;
    CompiledPolynomial<std::int64_t> compiled_;
    ValidSpace space_;
    std::vector<std::int64_t> values_;
    std::vector<std::size_t> order_;
    std::vector<std::int64_t> sorted_values_;
    std::unordered_map<std::uint64_t, std::size_t> by_key_;
};

/// Measurement of G^L A_c |0> restricted to the key register.
class MeasurementBackend {
   public:
    virtual ~MeasurementBackend() = default;
    /// Returns the measured candidate index.
    virtual std::size_t measure(std::int64_t threshold, std::size_t rotations, Rng& rng) = 0;
    /// Exact measurement distribution over candidates.
    virtual std::vector<double> distribution(std::int64_t threshold, std::size_t rotations) = 0;
    /// Total Grover operators applied so far.
    virtual std::size_t grover_applications() const = 0;
};

/// Closed-form Grover dynamics on the uniform valid-codeword superposition.
class AnalyticBackend final : public MeasurementBackend {
   public:
    explicit AnalyticBackend(const SearchProblem& problem) : problem_(problem) {}

    std::size_t measure(std::int64_t threshold, std::size_t rotations, Rng& rng) override {
        const std::size_t total = problem_.size();
        const std::size_t marked = problem_.marked_count(threshold);
        applied_ += rotations;
        if (marked == 0) {
            std::uniform_int_distribution<std::size_t> any(0, total - 1);
            return problem_.ranked(any(rng));
        }
        double p = grover_success_probability(marked, total, rotations);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        bool hit = marked == total || unit(rng) < p;
        if (hit) {
            std::uniform_int_distribution<std::size_t> pick(0, marked - 1);
            return problem_.ranked(pick(rng));
        }
        std::uniform_int_distribution<std::size_t> pick(marked, total - 1);
        return problem_.ranked(pick(rng));
    }

    std::vector<double> distribution(std::int64_t threshold, std::size_t rotations) override {
        const std::size_t total = problem_.size();
        const std::size_t marked = problem_.marked_count(threshold);
        std::vector<double> out(total, 0.0);
        if (marked == 0) {
            std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(total));
            return out;
        }
        double p = grover_success_probability(marked, total, rotations);
        for (std::size_t r = 0; r < total; ++r) {
            out[problem_.ranked(r)] = r < marked ? p / static_cast<double>(marked)
                                                 : (1.0 - p) / static_cast<double>(total - marked);
        }
        return out;
    }

    std::size_t grover_applications() const override { return applied_; }

   private:
    const SearchProblem& problem_;
    std::size_t applied_ = 0;
};

/// Gate-level simulation of A_c = dictionary(c) . prepare and G = A D A^H O.
class StatevectorBackend final : public MeasurementBackend {
   public:
    StatevectorBackend(const SearchProblem& problem, int value_qubits, DictionaryMode mode = DictionaryMode::integer)
        : problem_(problem), mode_(mode) {
        layout_.num_key = static_cast<unsigned>(problem.instance().num_bits());
        layout_.num_value = static_cast<unsigned>(value_qubits);
        if (layout_.total() > kMaxQubits) {
            throw ResourceLimit("statevector backend needs " + std::to_string(layout_.total()) + " qubits, cap is " +
                                std::to_string(kMaxQubits));
        }
        prepare_ = prepare_initial_circuit(problem.instance(), problem.use_diff(), layout_);
    }

    const RegisterLayout& layout() const { return layout_; }

    Circuit state_preparation(std::int64_t threshold) const {
        Circuit a(layout_.total());
        a.append(prepare_);
        if (mode_ == DictionaryMode::integer) {
            a.append(dictionary_circuit(problem_.quantized(), threshold, layout_));
        } else {
            a.append(dictionary_circuit_real(problem_.objective(), problem_.quantized().to_real(threshold),
                                             problem_.quantized().scale_bits, layout_));
        }
        return a;
    }

    /// G^L A_c |0>.
    StateVector evolve(std::int64_t threshold, std::size_t rotations) {
        Circuit a = state_preparation(threshold);
        StateVector state(layout_.total());
        state.apply(a);
        if (rotations > 0) {
            Circuit g = grover_operator(a, layout_);
            for (std::size_t l = 0; l < rotations; ++l) {
                state.apply(g);
                ++applied_;
            }
        }
        return state;
    }

    std::size_t measure(std::int64_t threshold, std::size_t rotations, Rng& rng) override {
        StateVector state = evolve(threshold, rotations);
        auto outcome = measure_all(state, rng);
        auto key = layout_.key_of(outcome.index);
        auto cand = problem_.candidate_of(key);
        if (!cand) {
            throw std::logic_error("measured key " + std::to_string(key) + " is not a valid codeword assignment");
        }
        return *cand;
    }

    std::vector<double> distribution(std::int64_t threshold, std::size_t rotations) override {
        StateVector state = evolve(threshold, rotations);
        std::vector<double> out(problem_.size(), 0.0);
        invalid_mass_ = 0.0;
        const auto& amps = state.amplitudes();
        for (std::size_t i = 0; i < amps.size(); ++i) {
            double p = std::norm(amps[i]);
            if (p == 0.0) continue;
            auto cand = problem_.candidate_of(layout_.key_of(i));
            if (cand) {
                out[*cand] += p;
            } else {
                invalid_mass_ += p;
            }
        }
        return out;
    }

    /// Probability mass found outside the valid set by the last distribution().
    double invalid_mass() const { return invalid_mass_; }

    std::size_t grover_applications() const override { return applied_; }

   private:
    const SearchProblem& problem_;
    DictionaryMode mode_;
    RegisterLayout layout_;
    Circuit prepare_;
    std::size_t applied_ = 0;
    double invalid_mass_ = 0.0;
};

/// A starting point drawn from the valid codewords only.
struct InitialSample {
    BitVector key;
    std::size_t candidate = 0;
    std::int64_t value = 0;
};

/// Draws M*K information bits, encodes every level, interleaves and applies
/// the per-symbol transform, then evaluates the objective.
template <class R>
InitialSample modified_uniform_sample(const SearchProblem& problem, R& rng) {
    const auto& inst = problem.instance();
    const std::size_t kbits = inst.code.dimension();
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<BitVector> codewords;
    std::uint64_t candidate = 0;
    for (int s = 0; s < inst.levels(); ++s) {
        BitVector u(inst.code.length(), 0);
        const auto& info = inst.code.info_set();
        for (std::size_t j = 0; j < info.size(); ++j) {
            auto b = static_cast<Bit>(coin(rng));
            u[info[j]] = b;
            candidate |= static_cast<std::uint64_t>(b) << (static_cast<std::size_t>(s) * kbits + j);
        }
        codewords.push_back(polar_encode(inst.code, u));
    }
    InitialSample out;
    out.key = codewords_to_key(inst, codewords, problem.use_diff());
    out.candidate = candidate;
    out.value = problem.evaluate_key(pack_bits(out.key));
    return out;
}

struct IterationRecord {
    std::size_t rotations = 0;
    std::size_t candidate = 0;
    std::int64_t value_q = 0;
    double value = 0.0;
    bool improved = false;
};

/// Adaptive-loop state.
struct GasRun {
    std::size_t i = 0;
    double k = 1.0;
    std::int64_t threshold = 0;
    std::size_t incumbent = 0;
    std::vector<std::int64_t> thresholds;  // c_0, c_1, ..., c_i
    std::vector<double> k_trace;           // k used to draw L_i
    std::vector<IterationRecord> history;
};

struct ComplexityReport {
    std::size_t cd = 0;
    std::size_t qd = 0;
    bool reached_optimum = false;
    std::optional<std::size_t> optimum_iteration;
    std::optional<std::size_t> qd_at_optimum;
};

struct GasResult {
    std::vector<BitVector> codewords;
    std::vector<BitVector> u;
    BitVector info_bits;
    BitVector key;
    double value = 0.0;
    std::int64_t value_q = 0;
    int value_qubits = 0;
    GasRun run;
    ComplexityReport report;
    std::size_t grover_applications = 0;  // as counted by the backend
};

/// Smallest value register that holds E_q - c_q for every reachable threshold.
inline int required_value_qubits(const SearchProblem& problem) {
    return threshold_register_spec(problem.quantized()).m;
}

/// Adaptive Grover search. `optimum` lists the candidate indices regarded as
/// optimal for CD/QD-at-optimum accounting; empty means the E_q argmin.
inline GasResult gas_decode(const SearchProblem& problem, const GasConfig& config, Rng& rng,
                            std::vector<std::size_t> optimum = {}) {
    if (!(config.lambda > 1.0)) {
        throw ConfigurationError("lambda must be > 1");
    }
    if (config.patience < 1) {
        throw ConfigurationError("patience must be >= 1");
    }
    const int needed = required_value_qubits(problem);
    const int m = config.m == 0 ? needed : config.m;
    if (m < needed) {
        throw ConfigurationError("value register of " + std::to_string(m) + " qubits cannot hold the objective range (" +
                                 std::to_string(needed) + " needed at scale 2^" + std::to_string(config.scale_bits) + ")");
    }

    std::unique_ptr<MeasurementBackend> backend;
    if (config.backend == BackendKind::analytic) {
        backend = std::make_unique<AnalyticBackend>(problem);
    } else {
        backend = std::make_unique<StatevectorBackend>(problem, m, config.dictionary_mode);
    }

    if (optimum.empty()) {
        for (std::size_t r = 0; r < problem.size() && problem.value(problem.ranked(r)) == problem.min_value(); ++r) {
            optimum.push_back(problem.ranked(r));
        }
    }
    std::sort(optimum.begin(), optimum.end());
    auto is_optimal = [&](std::size_t c) { return std::binary_search(optimum.begin(), optimum.end(), c); };

    const double k_max = problem.sqrt_size();
    const std::size_t max_iter = config.max_classical_iterations != 0
                                     ? config.max_classical_iterations
                                     : static_cast<std::size_t>(std::ceil(10.0 * k_max));

    GasResult result;
    result.value_qubits = m;
    GasRun& run = result.run;
    ComplexityReport& report = result.report;

    auto start = modified_uniform_sample(problem, rng);
    run.incumbent = start.candidate;
    run.threshold = start.value;
    run.thresholds.push_back(run.threshold);
    if (is_optimal(run.incumbent)) {
        report.optimum_iteration = 0;
        report.qd_at_optimum = 0;
    }

    std::size_t stale = 0;
    while (run.i < max_iter) {
        if (run.k >= k_max && stale >= config.patience) {
            break;
        }
        const bool saturated = run.k >= k_max;
        std::size_t rotations = sample_rotation_count(run.k, rng);
        run.k_trace.push_back(run.k);
        std::size_t cand = backend->measure(run.threshold, rotations, rng);
        report.qd += rotations;

        IterationRecord rec;
        rec.rotations = rotations;
        rec.candidate = cand;
        rec.value_q = problem.evaluate_key(problem.space().key(cand));
        rec.value = problem.quantized().to_real(rec.value_q);
        if (rec.value_q < run.threshold) {
            rec.improved = true;
            run.incumbent = cand;
            run.threshold = rec.value_q;
            run.k = 1.0;
            stale = 0;
        } else {
            run.k = std::min(config.lambda * run.k, k_max);
            if (saturated) ++stale;
        }
        run.history.push_back(rec);
        ++run.i;
        run.thresholds.push_back(run.threshold);
        if (!report.optimum_iteration && is_optimal(run.incumbent)) {
            report.optimum_iteration = run.i;
            report.qd_at_optimum = report.qd;
        }
    }
    report.cd = run.i;
    report.reached_optimum = report.optimum_iteration.has_value();
    result.grover_applications = backend->grover_applications();

    const auto& inst = problem.instance();
    result.key = unpack_bits(problem.space().key(run.incumbent), inst.num_bits());
    result.codewords = key_to_codewords(inst, result.key, problem.use_diff());
    result.u = codewords_to_u(inst.code, result.codewords);
    result.info_bits = codewords_to_info_bits(inst.code, result.codewords);
    result.value_q = run.threshold;
    result.value = problem.quantized().to_real(run.threshold);
    return result;
}

/// Convenience overload: builds the search problem and scores CD/QD against
/// the brute-force ML argmin when given.
inline GasResult gas_decode(const ProblemInstance& inst, const GasConfig& config, Rng& rng,
                            const MlResult* ml = nullptr) {
    SearchProblem problem(inst, config.use_diff, config.scale_bits);
    std::vector<std::size_t> optimum;
    if (ml) {
        for (auto c : ml->minimizers) optimum.push_back(static_cast<std::size_t>(c));
    }
    return gas_decode(problem, config, rng, std::move(optimum));
}

inline nlohmann::json code_to_json(const PolarCode& code) {
    return {{"n_bits", code.length()}, {"k_bits", code.dimension()}, {"frozen", code.frozen_set()}};
}

/// Per-run record: {seed, snr_db, code, modulation, backend, decoded_bits,
/// ml_match, cd, qd, iterations: [{L, E}]}.
inline nlohmann::json run_record(const ProblemInstance& inst, const GasResult& r, std::uint64_t seed, double snr_db,
                                 BackendKind backend, std::optional<bool> ml_match) {
    nlohmann::json iters = nlohmann::json::array();
    for (const auto& it : r.run.history) {
        iters.push_back({{"L", it.rotations}, {"E", it.value}});
    }
    nlohmann::json j = {{"seed", seed},
                        {"snr_db", std::isfinite(snr_db) ? nlohmann::json(snr_db) : nlohmann::json(nullptr)},
                        {"code", code_to_json(inst.code)},
                        {"modulation", inst.modulation.name()},
                        {"backend", backend_name(backend)},
                        {"decoded_bits", format_bits(r.info_bits)},
                        {"ml_match", ml_match ? nlohmann::json(*ml_match) : nlohmann::json(nullptr)},
                        {"cd", r.report.cd},
                        {"qd", r.report.qd},
                        {"iterations", std::move(iters)}};
    return j;
}

}  // namespace gaspolar
