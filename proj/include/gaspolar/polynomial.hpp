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
#include <iterator>
#include <map>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gaspolar/common.hpp"

namespace gaspolar {

/// Sorted, duplicate-free variable subset. Empty means the constant term.
using Monomial = std::vector<std::uint32_t>;

/// Real-coefficient multilinear polynomial over binary variables. Products
/// are reduced with x^2 = x, so every monomial is a plain subset.
class MultilinearPolynomial {
   public:
    MultilinearPolynomial() = default;
    explicit MultilinearPolynomial(std::size_t num_vars) : num_vars_(num_vars) {}

    static MultilinearPolynomial constant(std::size_t num_vars, double value) {
        MultilinearPolynomial p(num_vars);
        p.add_term({}, value);
        return p;
    }

    static MultilinearPolynomial variable(std::size_t num_vars, std::uint32_t index, double coeff = 1.0) {
        MultilinearPolynomial p(num_vars);
        p.add_term({index}, coeff);
        return p;
    }

    std::size_t num_vars() const { return num_vars_; }
    const std::map<Monomial, double>& terms() const { return terms_; }
    std::size_t num_terms() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    std::size_t degree() const {
        std::size_t d = 0;
        for (const auto& [mono, coeff] : terms_) {
            d = std::max(d, mono.size());
        }
        return d;
    }

    double constant_term() const {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? 0.0 : it->second;
    }

    double coefficient(Monomial vars) const {
        normalize(vars);
        auto it = terms_.find(vars);
        return it == terms_.end() ? 0.0 : it->second;
    }

    /// Accumulates coeff * prod_{v in vars} x_v. Repeated indices collapse.
    void add_term(Monomial vars, double coeff) {
        normalize(vars);
        for (auto v : vars) {
            if (v >= num_vars_) {
                throw InvalidInput("monomial index " + std::to_string(v) + " >= num_vars " +
                                   std::to_string(num_vars_));
            }
        }
        if (coeff == 0.0) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(std::move(vars), coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second == 0.0) {
                terms_.erase(it);
            }
        }
    }

    /// Drops terms with |coeff| <= eps (cancellation residue).
    void prune(double eps) {
        std::erase_if(terms_, [eps](const auto& kv) { return std::abs(kv.second) <= eps; });
    }

    double evaluate(std::span<const Bit> x) const {
        if (x.size() != num_vars_) {
            throw InvalidInput("evaluate: assignment has " + std::to_string(x.size()) + " bits, polynomial has " +
                               std::to_string(num_vars_) + " variables");
        }
        double sum = 0.0;
        for (const auto& [mono, coeff] : terms_) {
            bool on = true;
            for (auto v : mono) {
                if (!x[v]) {
                    on = false;
                    break;
                }
            }
            if (on) {
                sum += coeff;
            }
        }
        return sum;
    }

    MultilinearPolynomial& operator+=(const MultilinearPolynomial& other) {
        check_same_space(other);
        for (const auto& [mono, coeff] : other.terms_) {
            add_term(mono, coeff);
        }
        return *this;
    }

    MultilinearPolynomial& operator*=(double s) {
        if (s == 0.0) {
            terms_.clear();
            return *this;
        }
        for (auto& [mono, coeff] : terms_) {
            coeff *= s;
        }
        return *this;
    }

    friend MultilinearPolynomial operator+(MultilinearPolynomial a, const MultilinearPolynomial& b) {
        a += b;
        return a;
    }

    friend MultilinearPolynomial operator*(MultilinearPolynomial a, double s) {
        a *= s;
        return a;
    }

    /// Product with x^2 = x reduction (monomials multiply by set union).
    friend MultilinearPolynomial operator*(const MultilinearPolynomial& a, const MultilinearPolynomial& b) {
        a.check_same_space(b);
        MultilinearPolynomial out(a.num_vars_);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                Monomial u;
                u.reserve(ma.size() + mb.size());
                std::set_union(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(u));
                out.add_term(std::move(u), ca * cb);
            }
        }
        return out;
    }

   private:
    static void normalize(Monomial& vars) {
        std::sort(vars.begin(), vars.end());
        vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    }

    void check_same_space(const MultilinearPolynomial& other) const {
        if (other.num_vars_ != num_vars_) {
            throw InvalidInput("polynomials over different variable counts");
        }
    }

    std::size_t num_vars_ = 0;
    std::map<Monomial, double> terms_;
};

/// {num_vars, terms: [{vars: [...], coeff: real}]}
inline nlohmann::json to_json(const MultilinearPolynomial& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [mono, coeff] : p.terms()) {
        terms.push_back({{"vars", mono}, {"coeff", coeff}});
    }
    return {{"num_vars", p.num_vars()}, {"terms", std::move(terms)}};
}

inline MultilinearPolynomial polynomial_from_json(const nlohmann::json& j) {
    MultilinearPolynomial p(j.at("num_vars").get<std::size_t>());
    for (const auto& t : j.at("terms")) {
        p.add_term(t.at("vars").get<Monomial>(), t.at("coeff").get<double>());
    }
    return p;
}

/// Integer-coefficient image of a polynomial at scale 2^f.
struct QuantizedPolynomial {
    struct Term {
        Monomial vars;
        std::int64_t coeff;
    };

    std::size_t num_vars = 0;
    int scale_bits = 0;
    std::int64_t constant = 0;
    std::vector<Term> terms;  // non-constant terms only, nonzero coefficients

    std::int64_t evaluate(std::span<const Bit> x) const {
        if (x.size() != num_vars) {
            throw InvalidInput("evaluate: assignment length mismatch");
        }
        std::int64_t sum = constant;
        for (const auto& t : terms) {
            bool on = std::all_of(t.vars.begin(), t.vars.end(), [&](std::uint32_t v) { return x[v] != 0; });
            if (on) {
                sum += t.coeff;
            }
        }
        return sum;
    }

    /// Interval-arithmetic range [lo, hi]; contains every attainable value.
    std::pair<std::int64_t, std::int64_t> bounds() const {
        std::int64_t lo = constant;
        std::int64_t hi = constant;
        for (const auto& t : terms) {
            (t.coeff < 0 ? lo : hi) += t.coeff;
        }
        return {lo, hi};
    }

    double to_real(std::int64_t v) const { return std::ldexp(static_cast<double>(v), -scale_bits); }
};

inline std::int64_t quantize_value(double v, int scale_bits) {
    double scaled = std::ldexp(v, scale_bits);
    if (!std::isfinite(scaled) || std::abs(scaled) > 9.0e15) {
        throw OverflowError("quantize: value out of 53-bit integer range");
    }
    return static_cast<std::int64_t>(std::llround(scaled));
}

inline QuantizedPolynomial quantize(const MultilinearPolynomial& p, int scale_bits) {
    if (scale_bits < 0 || scale_bits > 40) {
        throw InvalidParameter("scale_bits must be in [0, 40]");
    }
    QuantizedPolynomial q;
    q.num_vars = p.num_vars();
    q.scale_bits = scale_bits;
    for (const auto& [mono, coeff] : p.terms()) {
        std::int64_t c = quantize_value(coeff, scale_bits);
        if (mono.empty()) {
            q.constant += c;
        } else if (c != 0) {
            q.terms.push_back({mono, c});
        }
    }
    return q;
}

/// Polynomial with <= 64 variables compiled to bitmasks, for inner loops that
/// evaluate many assignments.
template <class Coeff>
class CompiledPolynomial {
   public:
    CompiledPolynomial() = default;

    explicit CompiledPolynomial(const MultilinearPolynomial& p)
        requires std::is_floating_point_v<Coeff>
        : num_vars_(p.num_vars()) {
        check_width();
        for (const auto& [mono, coeff] : p.terms()) {
            add(mono, coeff);
        }
    }

    explicit CompiledPolynomial(const QuantizedPolynomial& q)
        requires std::is_integral_v<Coeff>
        : num_vars_(q.num_vars) {
        check_width();
        constant_ = q.constant;
        for (const auto& t : q.terms) {
            add(t.vars, t.coeff);
        }
    }

    std::size_t num_vars() const { return num_vars_; }

    /// Bit j of `packed` is variable j.
    Coeff evaluate(std::uint64_t packed) const {
        Coeff sum = constant_;
        for (std::size_t t = 0; t < masks_.size(); ++t) {
            if ((packed & masks_[t]) == masks_[t]) {
                sum += coeffs_[t];
            }
        }
        return sum;
    }

   private:
    void check_width() const {
        if (num_vars_ > 64) {
            throw ResourceLimit("compiled polynomial supports at most 64 variables");
        }
    }

    void add(const Monomial& mono, Coeff coeff) {
        if (mono.empty()) {
            constant_ += coeff;
            return;
        }
        std::uint64_t mask = 0;
        for (auto v : mono) {
            mask |= std::uint64_t{1} << v;
        }
        masks_.push_back(mask);
        coeffs_.push_back(coeff);
    }

    std::size_t num_vars_ = 0;
    Coeff constant_{};
    std::vector<std::uint64_t> masks_;
    std::vector<Coeff> coeffs_;
};

/// Value register size m and fixed-point fractional bits f.
struct ValueRegisterSpec {
    int m = 1;
    int scale_bits = 0;
};

/// Smallest m >= 1 with -2^{m-1} <= lo and hi < 2^{m-1}.
inline int twos_complement_width(std::int64_t lo, std::int64_t hi) {
    int m = 1;
    while (m < 63) {
        std::int64_t half = std::int64_t{1} << (m - 1);
        if (-half <= lo && hi < half) {
            return m;
        }
        ++m;
    }
    throw OverflowError("value range does not fit in 63 bits");
}

/// Register wide enough for every value of the quantized objective.
inline ValueRegisterSpec value_register_spec(const MultilinearPolynomial& p, int scale_bits) {
    auto q = quantize(p, scale_bits);
    auto [lo, hi] = q.bounds();
    return {twos_complement_width(lo, hi), scale_bits};
}

/// Register wide enough for E_q(x) - c_q whenever c_q lies in the objective's
/// own range, i.e. for every threshold an adaptive search can produce.
inline ValueRegisterSpec threshold_register_spec(const QuantizedPolynomial& q) {
    auto [lo, hi] = q.bounds();
    return {twos_complement_width(lo - hi, hi - lo), q.scale_bits};
}

}  // namespace gaspolar
