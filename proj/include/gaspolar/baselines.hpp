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
#include <limits>
#include <string>
#include <vector>

#include "gaspolar/instance.hpp"
#include "gaspolar/objectives.hpp"
#include "gaspolar/polynomial.hpp"

namespace gaspolar {

/// Exhaustive ML result. Minimizers are candidate indices in information
/// pattern order (see ValidSpace), so minimizers.front() is the
/// lexicographically smallest representative.
struct MlResult {
    std::vector<std::uint64_t> minimizers;
    double minimum = std::numeric_limits<double>::infinity();
    std::vector<std::vector<BitVector>> codewords;  // per minimizer, M x N
    std::vector<BitVector> info_bits;               // per minimizer, M*K

    bool contains_info(const BitVector& bits) const {
        for (const auto& b : info_bits) {
            if (b == bits) return true;
        }
        return false;
    }
};

/// Literal squared-distance evaluation over all 2^{MK} codeword tuples.
/// Values within `tie_tolerance` of the minimum count as ties.
inline MlResult ml_decode_bruteforce(const ProblemInstance& inst, unsigned cap = kEnumerationCap,
                                     double tie_tolerance = 1e-12) {
    const std::size_t mk = inst.search_bits();
    if (mk > cap) {
        throw ResourceLimit("ML brute force over 2^" + std::to_string(mk) + " exceeds cap 2^" + std::to_string(cap));
    }
    const std::size_t kbits = inst.code.dimension();
    auto per_level = enumerate_valid_codewords(inst.code, cap);
    const std::uint64_t count = std::uint64_t{1} << mk;

    std::vector<double> dist(count);
    std::vector<BitVector> cws(static_cast<std::size_t>(inst.levels()));
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t c = 0; c < count; ++c) {
        auto patterns = candidate_patterns(c, kbits, inst.levels());
        for (std::size_t s = 0; s < patterns.size(); ++s) {
            cws[s] = per_level[patterns[s]];
        }
        dist[c] = literal_distance(inst, cws);
        best = std::min(best, dist[c]);
    }

    MlResult out;
    out.minimum = best;
    for (std::uint64_t c = 0; c < count; ++c) {
        if (dist[c] <= best + tie_tolerance) {
            out.minimizers.push_back(c);
            auto patterns = candidate_patterns(c, kbits, inst.levels());
            std::vector<BitVector> levels;
            BitVector info;
            for (auto p : patterns) {
                levels.push_back(per_level[p]);
                auto u = info_pattern_to_u(inst.code, p);
                auto bits = u_to_info_bits(inst.code, u);
                info.insert(info.end(), bits.begin(), bits.end());
            }
            out.codewords.push_back(std::move(levels));
            out.info_bits.push_back(std::move(info));
        }
    }
    return out;
}

struct BruteForceMin {
    std::vector<std::uint64_t> minimizers;  // packed assignments, ascending
    double minimum = std::numeric_limits<double>::infinity();
};

/// Exhaustive minimization of a polynomial over all 2^{num_vars} assignments.
inline BruteForceMin kasi_bruteforce_min(const MultilinearPolynomial& poly, std::size_t max_vars = 20,
                                         double tie_tolerance = 1e-9) {
    if (poly.num_vars() > max_vars) {
        throw ResourceLimit("brute-force minimization limited to " + std::to_string(max_vars) + " variables, got " +
                            std::to_string(poly.num_vars()));
    }
    CompiledPolynomial<double> compiled(poly);
    const std::uint64_t count = std::uint64_t{1} << poly.num_vars();
    BruteForceMin out;
    for (std::uint64_t a = 0; a < count; ++a) {
        double v = compiled.evaluate(a);
        if (v < out.minimum - tie_tolerance) {
            out.minimum = v;
            out.minimizers.clear();
            out.minimizers.push_back(a);
        } else if (v <= out.minimum + tie_tolerance) {
            out.minimizers.push_back(a);
            out.minimum = std::min(out.minimum, v);
        }
    }
    return out;
}

enum class Formulation { proposed, conventional };

/// log2 of the search space: M*K for the valid-codeword superposition,
/// M*N*(log2 N + 1) for the constraint-based QUBO.
inline std::size_t search_space_report(const PolarCode& code, int levels, Formulation formulation) {
    const auto m = static_cast<std::size_t>(levels);
    if (formulation == Formulation::proposed) {
        return m * code.dimension();
    }
    return m * code.length() * (code.stages() + 1);
}

}  // namespace gaspolar
