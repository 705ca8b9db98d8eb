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
#include <string>
#include <string_view>
#include <vector>

#include <toml.hpp>

#include "gaspolar/experiment.hpp"

// TOML experiment configuration:
//
//   [code]        n_bits, k_bits, frozen = [..]
//   [modulation]  scheme = "bpsk" | "pam4" | ...; interleaver = "identity" |
//                 "random" (with interleaver_seed) | [explicit permutation]
//   [experiment]  snr_db = [..] (or a single number), trials, master_seed, out
//   [gas]         backend, lambda, patience, max_classical_iterations, m,
//                 scale_bits, use_diff
//
// Every key is optional; missing keys keep the ExperimentConfig defaults.

namespace gaspolar {

namespace detail {

template <class T>
std::vector<T> toml_int_array(const toml::node& node, std::string_view what) {
    const auto* arr = node.as_array();
    if (!arr) throw ConfigurationError(std::string(what) + " must be an array");
    std::vector<T> out;
    for (const auto& el : *arr) {
        auto v = el.value<std::int64_t>();
        if (!v || *v < 0) throw ConfigurationError(std::string(what) + " must hold non-negative integers");
        out.push_back(static_cast<T>(*v));
    }
    return out;
}

inline std::size_t toml_count(const toml::node_view<const toml::node>& node, std::size_t fallback, std::string_view what) {
    if (!node) return fallback;
    auto v = node.value<std::int64_t>();
    if (!v || *v < 0) throw ConfigurationError(std::string(what) + " must be a non-negative integer");
    return static_cast<std::size_t>(*v);
}

}  // namespace detail

inline ExperimentConfig experiment_config_from_toml(const toml::table& tbl) {
    ExperimentConfig cfg;
    if (auto code = tbl["code"]) {
        cfg.code.n_bits = detail::toml_count(code["n_bits"], cfg.code.n_bits, "code.n_bits");
        cfg.code.k_bits = detail::toml_count(code["k_bits"], cfg.code.k_bits, "code.k_bits");
        if (auto f = code["frozen"]; f) cfg.code.frozen = detail::toml_int_array<std::size_t>(*f.node(), "code.frozen");
    }
    if (auto mod = tbl["modulation"]) {
        if (auto s = mod["scheme"].value<std::string>()) cfg.modulation = *s;
        if (auto il = mod["interleaver"]; il) {
            if (auto name = il.value<std::string>()) {
                if (*name == "identity") {
                    cfg.interleaver.kind = InterleaverSpec::Kind::identity;
                } else if (*name == "random") {
                    cfg.interleaver.kind = InterleaverSpec::Kind::random;
                    cfg.interleaver.seed = detail::toml_count(mod["interleaver_seed"], 0, "modulation.interleaver_seed");
                } else {
                    throw ConfigurationError("modulation.interleaver must be identity, random or an array");
                }
            } else {
                cfg.interleaver.kind = InterleaverSpec::Kind::explicit_perm;
                cfg.interleaver.perm = detail::toml_int_array<std::size_t>(*il.node(), "modulation.interleaver");
            }
        }
    }
    if (auto ex = tbl["experiment"]) {
        if (auto snr = ex["snr_db"]; snr) {
            if (const auto* arr = snr.as_array()) {
                cfg.snr_db.clear();
                for (const auto& el : *arr) {
                    auto v = el.value<double>();
                    if (!v) throw ConfigurationError("experiment.snr_db must hold numbers");
                    cfg.snr_db.push_back(*v);
                }
            } else if (auto v = snr.value<double>()) {
                cfg.snr_db = {*v};
            } else {
                throw ConfigurationError("experiment.snr_db must be a number or array");
            }
        }
        cfg.trials = detail::toml_count(ex["trials"], cfg.trials, "experiment.trials");
        cfg.master_seed = detail::toml_count(ex["master_seed"], cfg.master_seed, "experiment.master_seed");
        if (auto o = ex["out"].value<std::string>()) cfg.out = *o;
    }
    if (auto g = tbl["gas"]) {
        if (auto b = g["backend"].value<std::string>()) cfg.gas.backend = parse_backend(*b);
        if (auto l = g["lambda"].value<double>()) cfg.gas.lambda = *l;
        cfg.gas.patience = detail::toml_count(g["patience"], cfg.gas.patience, "gas.patience");
        cfg.gas.max_classical_iterations =
            detail::toml_count(g["max_classical_iterations"], cfg.gas.max_classical_iterations, "gas.max_classical_iterations");
        cfg.gas.m = static_cast<int>(detail::toml_count(g["m"], static_cast<std::size_t>(cfg.gas.m), "gas.m"));
        cfg.gas.scale_bits =
            static_cast<int>(detail::toml_count(g["scale_bits"], static_cast<std::size_t>(cfg.gas.scale_bits), "gas.scale_bits"));
        if (auto d = g["use_diff"].value<bool>()) cfg.gas.use_diff = *d;
    }
    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    try {
        return experiment_config_from_toml(toml::parse_file(path));
    } catch (const toml::parse_error& e) {
        throw ConfigurationError("failed to parse " + path + ": " + std::string(e.description()));
    }
}

inline ExperimentConfig parse_experiment_config(std::string_view text) {
    try {
        return experiment_config_from_toml(toml::parse(text));
    } catch (const toml::parse_error& e) {
        throw ConfigurationError("failed to parse config: " + std::string(e.description()));
    }
}

}  // namespace gaspolar
