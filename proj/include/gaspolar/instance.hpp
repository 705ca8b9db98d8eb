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
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gaspolar/modem.hpp"
#include "gaspolar/objectives.hpp"
#include "gaspolar/polar.hpp"

// Bit plumbing between the transmitter's M codewords and the decoder's key
// register. Stages, in transmit order:
//
//   flat[s*N + i] = x_{s,i}                      (M codewords side by side)
//   stream[p]     = flat[perm[p]]                (interleaver)
//   symbol i      = (stream[i], stream[N+i], ..., stream[(M-1)N+i])
//   key           = per-symbol cumulative XOR of stream (when use_diff)

namespace gaspolar {

/// Bit interleaver over M*N positions: out[p] = in[perm[p]].
class Interleaver {
   public:
    Interleaver() = default;

    explicit Interleaver(std::vector<std::size_t> perm) : perm_(std::move(perm)) {
        std::vector<std::size_t> sorted = perm_;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i] != i) {
                throw InvalidParameter("interleaver is not a permutation of 0.." + std::to_string(perm_.size() - 1));
            }
        }
    }

    static Interleaver identity(std::size_t size) {
        std::vector<std::size_t> p(size);
        std::iota(p.begin(), p.end(), std::size_t{0});
        return Interleaver(std::move(p));
    }

    template <class Rng>
    static Interleaver random(std::size_t size, Rng& rng) {
        std::vector<std::size_t> p(size);
        std::iota(p.begin(), p.end(), std::size_t{0});
        std::shuffle(p.begin(), p.end(), rng);
        return Interleaver(std::move(p));
    }

    std::size_t size() const { return perm_.size(); }
    const std::vector<std::size_t>& permutation() const { return perm_; }
    bool is_identity() const {
        for (std::size_t i = 0; i < perm_.size(); ++i) {
            if (perm_[i] != i) {
                return false;
            }
        }
        return true;
    }

    BitVector apply(std::span<const Bit> in) const {
        check(in.size());
        BitVector out(in.size());
        for (std::size_t p = 0; p < perm_.size(); ++p) {
            out[p] = in[perm_[p]];
        }
        return out;
    }

    BitVector invert(std::span<const Bit> out) const {
        check(out.size());
        BitVector in(out.size());
        for (std::size_t p = 0; p < perm_.size(); ++p) {
            in[perm_[p]] = out[p];
        }
        return in;
    }

    /// Transpositions that turn a register laid out as `in` into `apply(in)`.
    std::vector<std::pair<std::size_t, std::size_t>> as_swaps() const {
        std::vector<std::size_t> holds(perm_.size());
        std::iota(holds.begin(), holds.end(), std::size_t{0});
        std::vector<std::size_t> where = holds;
        std::vector<std::pair<std::size_t, std::size_t>> swaps;
        for (std::size_t p = 0; p < perm_.size(); ++p) {
            if (holds[p] == perm_[p]) {
                continue;
            }
            std::size_t q = where[perm_[p]];
            swaps.emplace_back(p, q);
            std::swap(holds[p], holds[q]);
            where[holds[p]] = p;
            where[holds[q]] = q;
        }
        return swaps;
    }

   private:
    void check(std::size_t n) const {
        if (n != perm_.size()) {
            throw InvalidInput("interleaver size mismatch");
        }
    }

    std::vector<std::size_t> perm_;
};

/// Code + modulation + received vector: what both decoders consume.
struct ProblemInstance {
    PolarCode code;
    ModulationScheme modulation;
    std::vector<double> y;
    Interleaver interleaver;

    ProblemInstance(PolarCode c, ModulationScheme mod, std::vector<double> received, Interleaver il = {})
        : code(std::move(c)), modulation(mod), y(std::move(received)), interleaver(std::move(il)) {
        if (interleaver.size() == 0) {
            interleaver = Interleaver::identity(num_bits());
        }
        if (y.size() != code.length()) {
            throw InvalidInput("received vector has " + std::to_string(y.size()) + " samples, code length is " +
                               std::to_string(code.length()));
        }
        if (interleaver.size() != num_bits()) {
            throw InvalidInput("interleaver size must be M*N");
        }
    }

    int levels() const { return modulation.bits_per_symbol(); }
    std::size_t num_bits() const { return static_cast<std::size_t>(levels()) * code.length(); }
    /// log2 of the valid-codeword search space, M*K.
    std::size_t search_bits() const { return static_cast<std::size_t>(levels()) * code.dimension(); }
};

inline BitVector flatten_levels(std::span<const BitVector> levels) {
    BitVector flat;
    for (const auto& lv : levels) {
        flat.insert(flat.end(), lv.begin(), lv.end());
    }
    return flat;
}

inline std::vector<BitVector> split_levels(std::span<const Bit> flat, std::size_t symbols) {
    std::vector<BitVector> out;
    for (std::size_t off = 0; off < flat.size(); off += symbols) {
        out.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(off),
                         flat.begin() + static_cast<std::ptrdiff_t>(off + symbols));
    }
    return out;
}

inline BitVector symbol_label(std::span<const Bit> stream, std::size_t symbol, std::size_t symbols, int levels) {
    BitVector z(static_cast<std::size_t>(levels));
    for (int s = 0; s < levels; ++s) {
        z[static_cast<std::size_t>(s)] = stream[static_cast<std::size_t>(s) * symbols + symbol];
    }
    return z;
}

/// Gray-labelled symbols for an interleaved stream.
inline std::vector<double> modulate(std::span<const Bit> stream, const ModulationScheme& mod, std::size_t symbols) {
    std::vector<double> out(symbols);
    for (std::size_t i = 0; i < symbols; ++i) {
        out[i] = gray_pam_map(symbol_label(stream, i, symbols, mod.bits_per_symbol()), mod);
    }
    return out;
}

/// Applies gray_to_binary (forward) or binary_to_gray (backward) per symbol.
inline BitVector transform_symbols(std::span<const Bit> stream, std::size_t symbols, int levels, bool forward) {
    BitVector out(stream.begin(), stream.end());
    for (std::size_t i = 0; i < symbols; ++i) {
        auto z = symbol_label(stream, i, symbols, levels);
        auto t = forward ? gray_to_binary(z) : binary_to_gray(z);
        for (int s = 0; s < levels; ++s) {
            out[static_cast<std::size_t>(s) * symbols + i] = t[static_cast<std::size_t>(s)];
        }
    }
    return out;
}

/// Codewords (M x N) -> key register contents.
inline BitVector codewords_to_key(const ProblemInstance& inst, std::span<const BitVector> codewords, bool use_diff) {
    auto stream = inst.interleaver.apply(flatten_levels(codewords));
    if (use_diff && inst.levels() > 1) {
        stream = transform_symbols(stream, inst.code.length(), inst.levels(), true);
    }
    return stream;
}

/// Key register contents -> codewords (M x N).
inline std::vector<BitVector> key_to_codewords(const ProblemInstance& inst, std::span<const Bit> key, bool use_diff) {
    if (key.size() != inst.num_bits()) {
        throw InvalidInput("key length must be M*N");
    }
    BitVector stream(key.begin(), key.end());
    if (use_diff && inst.levels() > 1) {
        stream = transform_symbols(stream, inst.code.length(), inst.levels(), false);
    }
    return split_levels(inst.interleaver.invert(stream), inst.code.length());
}

/// Estimated u per level, x_s * G_N.
inline std::vector<BitVector> codewords_to_u(const PolarCode& code, std::span<const BitVector> codewords) {
    std::vector<BitVector> out;
    for (const auto& x : codewords) {
        out.push_back(polar_invert(code, x));
    }
    return out;
}

/// Information bits (K per level, concatenated) of a set of codewords.
inline BitVector codewords_to_info_bits(const PolarCode& code, std::span<const BitVector> codewords) {
    BitVector out;
    for (const auto& u : codewords_to_u(code, codewords)) {
        auto bits = u_to_info_bits(code, u);
        out.insert(out.end(), bits.begin(), bits.end());
    }
    return out;
}

/// The objective the quantum search minimizes: E' for BPSK, the degree-2
/// natural-label form when use_diff, otherwise the Gray HUBO.
inline MultilinearPolynomial decoder_objective(const ProblemInstance& inst, bool use_diff) {
    if (inst.levels() == 1) {
        return bpsk_simplified_objective(inst.y);
    }
    return use_diff ? natural_qubo_objective(inst.y, inst.levels()) : gray_hubo_objective(inst.y, inst.levels());
}

/// Squared Euclidean distance between y and the Gray-PAM image of codewords,
/// evaluated literally.
inline double literal_distance(const ProblemInstance& inst, std::span<const BitVector> codewords) {
    auto stream = inst.interleaver.apply(flatten_levels(codewords));
    auto symbols = modulate(stream, inst.modulation, inst.code.length());
    double d = 0.0;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        d += (inst.y[i] - symbols[i]) * (inst.y[i] - symbols[i]);
    }
    return d;
}

/// One transmitted block: uniformly drawn information, encoded and modulated.
struct Transmission {
    std::vector<BitVector> u;          // per level, length N
    std::vector<BitVector> codewords;  // per level, length N
    BitVector info_bits;               // K per level, concatenated
    std::vector<double> symbols;
};

inline Transmission make_transmission(const PolarCode& code, const ModulationScheme& mod,
                                      const Interleaver& interleaver, std::span<const std::uint64_t> patterns) {
    Transmission t;
    for (auto p : patterns) {
        t.u.push_back(info_pattern_to_u(code, p));
        t.codewords.push_back(polar_encode(code, t.u.back()));
        auto bits = u_to_info_bits(code, t.u.back());
        t.info_bits.insert(t.info_bits.end(), bits.begin(), bits.end());
    }
    t.symbols = modulate(interleaver.apply(flatten_levels(t.codewords)), mod, code.length());
    return t;
}

template <class Rng>
Transmission random_transmission(const PolarCode& code, const ModulationScheme& mod, const Interleaver& interleaver,
                                 Rng& rng) {
    std::vector<std::uint64_t> patterns(static_cast<std::size_t>(mod.bits_per_symbol()));
    std::uniform_int_distribution<std::uint64_t> bit(0, 1);
    for (auto& p : patterns) {
        p = 0;
        for (std::size_t j = 0; j < code.dimension(); ++j) {
            p |= bit(rng) << j;
        }
    }
    return make_transmission(code, mod, interleaver, patterns);
}

/// The 2^{MK} valid key assignments in information-pattern order. Candidate
/// c uses bits [s*K, (s+1)*K) of c as the information pattern of level s.
class ValidSpace {
   public:
    ValidSpace(const ProblemInstance& inst, bool use_diff, unsigned cap = kEnumerationCap) : use_diff_(use_diff) {
        const std::size_t kbits = inst.code.dimension();
        const std::size_t mk = inst.search_bits();
        if (mk > cap) {
            throw ResourceLimit("valid space 2^" + std::to_string(mk) + " exceeds enumeration cap 2^" +
                                std::to_string(cap));
        }
        if (inst.num_bits() > 64) {
            throw ResourceLimit("key register wider than 64 bits");
        }
        auto per_level = enumerate_valid_codewords(inst.code, cap);
        const std::uint64_t count = std::uint64_t{1} << mk;
        keys_.reserve(count);
        std::vector<BitVector> cws(static_cast<std::size_t>(inst.levels()));
        const std::uint64_t kmask = (std::uint64_t{1} << kbits) - 1;
        for (std::uint64_t c = 0; c < count; ++c) {
            for (int s = 0; s < inst.levels(); ++s) {
                cws[static_cast<std::size_t>(s)] = per_level[(c >> (static_cast<std::size_t>(s) * kbits)) & kmask];
            }
            keys_.push_back(pack_bits(codewords_to_key(inst, cws, use_diff)));
        }
    }

    std::size_t size() const { return keys_.size(); }
    bool use_diff() const { return use_diff_; }
    /// Packed key register for candidate c (bit j = key variable j).
    std::uint64_t key(std::size_t c) const { return keys_[c]; }
    const std::vector<std::uint64_t>& keys() const { return keys_; }

   private:
    bool use_diff_;
    std::vector<std::uint64_t> keys_;
};

/// Information patterns of candidate c, one per level.
inline std::vector<std::uint64_t> candidate_patterns(std::uint64_t c, std::size_t kbits, int levels) {
    std::vector<std::uint64_t> out;
    const std::uint64_t kmask = kbits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << kbits) - 1;
    for (int s = 0; s < levels; ++s) {
        out.push_back((c >> (static_cast<std::size_t>(s) * kbits)) & kmask);
    }
    return out;
}

}  // namespace gaspolar
