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

#include "gaspolar/polynomial.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "test_util.h"

using namespace gaspolar;

namespace {

struct RawTerm {
    std::vector<std::uint32_t> vars;  // may contain repeats
    double coeff;
};

MultilinearPolynomial random_polynomial(std::size_t num_vars, std::size_t terms, std::size_t max_degree,
                                        std::mt19937_64& rng, std::vector<RawTerm>* raw = nullptr) {
    std::uniform_int_distribution<std::size_t> deg(0, max_degree);
    std::uniform_int_distribution<std::uint32_t> var(0, static_cast<std::uint32_t>(num_vars - 1));
    std::uniform_real_distribution<double> coeff(-3.0, 3.0);
    MultilinearPolynomial p(num_vars);
    for (std::size_t t = 0; t < terms; ++t) {
        RawTerm rt;
        std::size_t d = deg(rng);
        for (std::size_t k = 0; k < d; ++k) rt.vars.push_back(var(rng));
        rt.coeff = coeff(rng);
        p.add_term(rt.vars, rt.coeff);
        if (raw) raw->push_back(rt);
    }
    return p;
}

}  // namespace

TEST(polynomial, evaluate_trivial_cases) {
    MultilinearPolynomial empty(3);
    ASSERT_EQ(empty.evaluate(BitVector{1, 0, 1}), 0.0);
    auto c = MultilinearPolynomial::constant(3, 3.5);
    for (std::uint64_t v = 0; v < 8; ++v) ASSERT_EQ(c.evaluate(unpack_bits(v, 3)), 3.5);
    ASSERT_THROW(c.evaluate(BitVector{1, 0}), InvalidInput);
    ASSERT_THROW(c.add_term({3}, 1.0), InvalidInput);
}

TEST(polynomial, evaluate_matches_naive_term_product) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<RawTerm> raw;
        auto p = random_polynomial(8, 12, 3, rng, &raw);
        ASSERT_LE(p.degree(), 3u);
        auto x = test_util::random_bits(8, rng);
        double naive = 0.0;
        for (const auto& t : raw) {
            double prod = t.coeff;
            for (auto v : t.vars) prod *= x[v];
            naive += prod;
        }
        ASSERT_NEAR(p.evaluate(x), naive, 1e-12);
    }
}

TEST(polynomial, product_reduces_squares) {
    auto x0 = MultilinearPolynomial::variable(2, 0);
    auto sq = x0 * x0;
    ASSERT_EQ(sq.num_terms(), 1u);
    ASSERT_EQ(sq.coefficient({0}), 1.0);
    auto one_minus = MultilinearPolynomial::constant(2, 1.0) + MultilinearPolynomial::variable(2, 1, -2.0);
    auto spin_sq = one_minus * one_minus;  // (1 - 2x)^2 = 1
    spin_sq.prune(1e-15);
    ASSERT_EQ(spin_sq.num_terms(), 1u);
    ASSERT_EQ(spin_sq.constant_term(), 1.0);
}

TEST(polynomial, compiled_forms_agree) {
    std::mt19937_64 rng(8);
    auto p = random_polynomial(10, 30, 4, rng);
    CompiledPolynomial<double> cp(p);
    for (std::uint64_t v = 0; v < 1024; ++v) {
        ASSERT_NEAR(cp.evaluate(v), p.evaluate(unpack_bits(v, 10)), 1e-12);
    }
    auto q = quantize(p, 6);
    CompiledPolynomial<std::int64_t> cq(q);
    for (std::uint64_t v = 0; v < 1024; ++v) {
        ASSERT_EQ(cq.evaluate(v), q.evaluate(unpack_bits(v, 10)));
    }
}

TEST(polynomial, quantization_error_bound) {
    std::mt19937_64 rng(21);
    for (int f : {0, 3, 8, 12}) {
        auto p = random_polynomial(9, 20, 3, rng);
        auto q = quantize(p, f);
        const double bound = static_cast<double>(p.num_terms()) * std::ldexp(1.0, -f - 1);
        for (std::uint64_t v = 0; v < 512; ++v) {
            auto x = unpack_bits(v, 9);
            ASSERT_LE(std::abs(q.to_real(q.evaluate(x)) - p.evaluate(x)), bound + 1e-12);
        }
    }
}

TEST(polynomial, value_register_examples) {
    // Range [-5, 6] at f = 0.
    MultilinearPolynomial p(1);
    p.add_term({}, -5.0);
    p.add_term({0}, 11.0);
    auto spec = value_register_spec(p, 0);
    ASSERT_EQ(spec.m, 4);
    ASSERT_EQ(spec.scale_bits, 0);
    ASSERT_EQ(value_register_spec(MultilinearPolynomial(3), 8).m, 1);
    ASSERT_EQ(twos_complement_width(-8, 7), 4);
    ASSERT_EQ(twos_complement_width(-9, 7), 5);
    ASSERT_EQ(twos_complement_width(-8, 8), 5);
    ASSERT_EQ(twos_complement_width(0, 0), 1);
    ASSERT_EQ(twos_complement_width(-1, 0), 1);
}

TEST(polynomial, interval_bound_contains_exhaustive_range) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t nv = 1 + rng() % 12;
        auto p = random_polynomial(nv, 1 + rng() % 25, 3, rng);
        auto q = quantize(p, 4);
        auto [lo, hi] = q.bounds();
        std::int64_t tlo = INT64_MAX;
        std::int64_t thi = INT64_MIN;
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << nv); ++v) {
            auto e = q.evaluate(unpack_bits(v, nv));
            tlo = std::min(tlo, e);
            thi = std::max(thi, e);
        }
        ASSERT_LE(lo, tlo);
        ASSERT_GE(hi, thi);
        int m = value_register_spec(p, 4).m;
        ASSERT_GE(tlo, -(std::int64_t{1} << (m - 1)));
        ASSERT_LT(thi, std::int64_t{1} << (m - 1));
    }
}

TEST(polynomial, json_round_trip) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        auto p = random_polynomial(7, 15, 3, rng);
        auto j = to_json(p);
        ASSERT_EQ(j["num_vars"], 7);
        auto back = polynomial_from_json(nlohmann::json::parse(j.dump()));
        ASSERT_EQ(back.terms(), p.terms());
    }
}
