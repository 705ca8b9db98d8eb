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

// gaspolar: command-line front end for the decoder library.

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gaspolar/config.hpp"
#include "gaspolar/gaspolar.hpp"

using namespace gaspolar;
using nlohmann::json;

namespace {

struct Options {
    std::string config;
    std::size_t n = 4;
    std::size_t k = 2;
    std::string frozen = "0,2";
    std::string mod = "bpsk";
    std::vector<double> snr_db;
    std::size_t trials = 0;
    std::uint64_t seed = 1;
    std::string backend;
    int m = 0;
    int scale_bits = 8;
    std::string out;
    std::string y;
    double threshold = 0.0;
    std::string input;
    unsigned threads = 0;
};

std::vector<std::size_t> parse_index_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(item, &pos);
        } catch (const std::exception&) {
            throw InvalidParameter("bad index '" + item + "' in --frozen");
        }
        if (pos != item.size()) throw InvalidParameter("bad index '" + item + "' in --frozen");
        out.push_back(v);
    }
    return out;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw InvalidInput("bad number '" + item + "' in --y");
        }
        if (pos != item.size()) throw InvalidInput("bad number '" + item + "' in --y");
        out.push_back(v);
    }
    return out;
}

class Cli {
   public:
    void add_code(CLI::App* sub) {
        sub->add_option("--n", opt_.n, "code length N in bits");
        sub->add_option("--k", opt_.k, "information bits K");
        sub->add_option("--frozen", opt_.frozen, "comma-separated frozen positions");
    }

    void add_instance(CLI::App* sub) {
        add_code(sub);
        sub->add_option("--mod", opt_.mod, "bpsk | pam4 | pam8 | pam16 | ...");
        sub->add_option("--snr-db", opt_.snr_db, "SNR in dB (one or more)")->delimiter(',');
        sub->add_option("--seed", opt_.seed, "master seed");
        sub->add_option("--y", opt_.y, "received samples, comma-separated (overrides --snr-db/--seed)");
        sub->add_option("--config", opt_.config, "TOML experiment config");
    }

    void add_gas(CLI::App* sub) {
        sub->add_option("--backend", opt_.backend, "analytic | statevector");
        sub->add_option("--m", opt_.m, "value-register qubits (0: automatic)");
        sub->add_option("--scale-bits", opt_.scale_bits, "fixed-point fraction bits f");
    }

    void add_batch(CLI::App* sub) {
        add_instance(sub);
        add_gas(sub);
        sub->add_option("--trials", opt_.trials, "trials per SNR point");
        sub->add_option("--out", opt_.out, "output CSV (stdout when omitted)");
        sub->add_option("--threads", opt_.threads, "worker threads (default GP_THREADS or all cores)");
    }

    Options& options() { return opt_; }

    /// Config file first, then any flag given explicitly on the command line.
    ExperimentConfig experiment(CLI::App* sub) const {
        ExperimentConfig cfg;
        if (!opt_.config.empty()) cfg = load_experiment_config(opt_.config);
        auto given = [&](const char* name) { return sub->get_option_no_throw(name) && sub->count(name) > 0; };
        if (given("--n")) cfg.code.n_bits = opt_.n;
        if (given("--k")) cfg.code.k_bits = opt_.k;
        if (given("--frozen")) cfg.code.frozen = parse_index_list(opt_.frozen);
        if (opt_.config.empty() && !given("--n") && !given("--k") && !given("--frozen")) {
            cfg.code = CodeSpec{opt_.n, opt_.k, parse_index_list(opt_.frozen)};
        }
        if (given("--mod")) cfg.modulation = opt_.mod;
        if (given("--snr-db")) cfg.snr_db = opt_.snr_db;
        if (given("--trials")) cfg.trials = opt_.trials;
        if (given("--seed")) cfg.master_seed = opt_.seed;
        if (given("--backend")) cfg.gas.backend = parse_backend(opt_.backend);
        if (given("--m")) cfg.gas.m = opt_.m;
        if (given("--scale-bits")) cfg.gas.scale_bits = opt_.scale_bits;
        if (given("--out")) cfg.out = opt_.out;
        cfg.validate();
        return cfg;
    }

   private:
    Options opt_;
};

/// Received vector from --y, or a seeded transmission through AWGN.
ProblemInstance build_instance(const ExperimentConfig& cfg, const Options& opt, Transmission* tx_out = nullptr) {
    auto code = cfg.code.build();
    auto mod = ModulationScheme::parse(cfg.modulation);
    auto il = cfg.interleaver.build(static_cast<std::size_t>(mod.bits_per_symbol()) * code.length());
    if (!opt.y.empty()) {
        return ProblemInstance(code, mod, parse_real_list(opt.y), il);
    }
    Rng rng(derive_seed(cfg.master_seed, 0, 0));
    auto tx = random_transmission(code, mod, il, rng);
    auto y = awgn_transmit(tx.symbols, ChannelModel::from_snr_db(cfg.snr_db.front()), rng);
    if (tx_out) *tx_out = tx;
    return ProblemInstance(code, mod, std::move(y), il);
}

std::string bits_of_levels(const std::vector<BitVector>& levels) {
    std::string out;
    for (std::size_t s = 0; s < levels.size(); ++s) {
        if (s) out += ' ';
        out += format_bits(levels[s]);
    }
    return out;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

void write_manifest(const ExperimentConfig& cfg, const std::string& command) {
    if (cfg.out.empty()) return;
    write_output(cfg.out + ".manifest.json", run_manifest(cfg, command).dump(2) + "\n");
}

int cmd_encode(const ExperimentConfig& cfg) {
    auto code = cfg.code.build();
    for (std::string line; std::getline(std::cin, line);) {
        auto bits = parse_bits(line);
        if (bits.empty()) continue;
        BitVector u;
        if (bits.size() == code.length()) {
            u = bits;
        } else if (bits.size() == code.dimension()) {
            u = BitVector(code.length(), 0);
            for (std::size_t j = 0; j < bits.size(); ++j) u[code.info_set()[j]] = bits[j];
        } else {
            throw InvalidInput("expected " + std::to_string(code.length()) + " input bits or " +
                               std::to_string(code.dimension()) + " information bits, got " + std::to_string(bits.size()));
        }
        std::cout << format_bits(polar_encode(code, u)) << '\n';
    }
    return 0;
}

int cmd_ml_decode(const ExperimentConfig& cfg, const Options& opt) {
    Transmission tx;
    auto inst = build_instance(cfg, opt, &tx);
    auto ml = ml_decode_bruteforce(inst);
    json minimizers = json::array();
    for (std::size_t i = 0; i < ml.minimizers.size(); ++i) {
        minimizers.push_back({{"codewords", bits_of_levels(ml.codewords[i])}, {"info_bits", format_bits(ml.info_bits[i])}});
    }
    json j = {{"code", code_to_json(inst.code)},
              {"modulation", inst.modulation.name()},
              {"y", inst.y},
              {"minimum", ml.minimum},
              {"minimizers", minimizers}};
    if (opt.y.empty()) j["transmitted_info_bits"] = format_bits(tx.info_bits);
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_gas_decode(const ExperimentConfig& cfg, const Options& opt) {
    auto inst = build_instance(cfg, opt);
    std::optional<MlResult> ml;
    if (inst.search_bits() <= kEnumerationCap) ml = ml_decode_bruteforce(inst);
    Rng rng(derive_seed(cfg.master_seed, 0, 1));
    auto r = gas_decode(inst, cfg.gas, rng, ml ? &*ml : nullptr);
    std::optional<bool> match;
    if (ml) match = ml->contains_info(r.info_bits);
    double snr = opt.y.empty() ? cfg.snr_db.front() : std::numeric_limits<double>::quiet_NaN();
    auto j = run_record(inst, r, cfg.master_seed, snr, cfg.gas.backend, match);
    write_output(cfg.out, j.dump(2) + "\n");
    return 0;
}

int cmd_bler(const ExperimentConfig& cfg, const Options& opt) {
    auto points = run_bler(cfg, opt.threads ? opt.threads : worker_count());
    std::ostringstream csv;
    write_bler_csv(csv, points);
    write_output(cfg.out, csv.str());
    write_manifest(cfg, "bler");
    for (const auto& p : points) {
        if (p.gas_not_ml > 0) {
            std::cerr << "note: snr " << p.snr_db << " dB: " << p.gas_not_ml << " GAS outputs outside the ML argmin, "
                      << p.ml_ties << " ML ties\n";
        }
    }
    return 0;
}

int cmd_cdf(const ExperimentConfig& cfg, const Options& opt) {
    auto rec = run_cdf(cfg, opt.threads ? opt.threads : worker_count());
    std::ostringstream csv;
    write_cdf_csv(csv, rec);
    write_output(cfg.out, csv.str());
    write_manifest(cfg, "cdf");
    std::cerr << "search space 2^" << rec.search_space_bits << ", " << rec.resolved() << " resolved, "
              << rec.censored() << " censored, median QD at optimum " << rec.median(true) << '\n';
    return 0;
}

/// Superposes every key, runs the dictionary and checks that each key is
/// paired with exactly E_q(x) - c_q in the value register.
int cmd_dict_verify(const ExperimentConfig& cfg, const Options& opt, bool scale_given) {
    auto inst = build_instance(cfg, opt);
    const bool use_diff = cfg.gas.use_diff && inst.levels() > 1;
    auto poly = decoder_objective(inst, use_diff);
    const unsigned nk = static_cast<unsigned>(inst.num_bits());

    auto fits = [&](const QuantizedPolynomial& q, int m, std::int64_t c) {
        auto [lo, hi] = q.bounds();
        return twos_complement_width(lo - c, hi - c) <= m;
    };
    int f = cfg.gas.scale_bits;
    int m = cfg.gas.m;
    if (m > 0 && !scale_given) {
        while (f > 0 && !fits(quantize(poly, f), m, quantize_value(opt.threshold, f))) --f;
    }
    auto q = quantize(poly, f);
    const std::int64_t c = quantize_value(opt.threshold, f);
    if (m == 0) {
        auto [lo, hi] = q.bounds();
        m = twos_complement_width(lo - c, hi - c);
    }
    RegisterLayout layout{nk, static_cast<unsigned>(m)};
    if (layout.total() > kMaxQubits) {
        throw ResourceLimit("dict-verify needs " + std::to_string(layout.total()) + " qubits, cap is " +
                            std::to_string(kMaxQubits));
    }
    StateVector state(layout.total());
    for (unsigned i = 0; i < nk; ++i) state.apply(Gate::h(i));
    state.apply(dictionary_circuit(q, c, layout));

    const std::uint64_t keys = std::uint64_t{1} << nk;
    const double expect = 1.0 / static_cast<double>(keys);
    CompiledPolynomial<std::int64_t> eval(q);
    std::uint64_t ok = 0;
    for (std::uint64_t x = 0; x < keys; ++x) {
        auto want = twos_complement(eval.evaluate(x) - c, layout.num_value);
        if (std::abs(std::norm(state[x | (want << nk)]) - expect) <= 1e-9) {
            ++ok;
        } else {
            std::cerr << "mismatch at key " << format_bits(unpack_bits(x, nk)) << '\n';
        }
    }
    std::cout << (ok == keys ? "OK " : "FAIL ") << ok << '/' << keys << " basis states (m=" << m << ", f=" << f
              << ")\n";
    return ok == keys ? 0 : 1;
}

int cmd_baseline_kasi(const ExperimentConfig& cfg, const Options& opt) {
    auto inst = build_instance(cfg, opt);
    if (inst.levels() != 1) throw InvalidParameter("baseline-kasi supports BPSK only");
    auto weights = KasiWeights::defaults(inst.code);
    auto q = kasi_qubo(inst.code, inst.y, weights);
    auto best = kasi_bruteforce_min(q.objective, 24);
    auto ml = ml_decode_bruteforce(inst);
    json layers = json::array();
    bool all_ml = true;
    for (auto a : best.minimizers) {
        auto bits = unpack_bits(a, q.objective.num_vars());
        BitVector layer;
        for (auto v : q.output_vars) layer.push_back(bits[v]);
        bool in_ml = false;
        for (const auto& cw : ml.codewords) in_ml = in_ml || cw[0] == layer;
        all_ml = all_ml && in_ml;
        layers.push_back(format_bits(layer));
    }
    json j = {{"code", code_to_json(inst.code)},
              {"y", inst.y},
              {"weights", {{"encoding", weights.encoding}, {"frozen", weights.frozen}, {"receiver", weights.receiver}}},
              {"num_vars", q.objective.num_vars()},
              {"num_terms", q.objective.num_terms()},
              {"search_space_bits", search_space_report(inst.code, 1, Formulation::conventional)},
              {"proposed_search_space_bits", search_space_report(inst.code, 1, Formulation::proposed)},
              {"minimum", best.minimum},
              {"codeword_layers", layers},
              {"matches_ml", all_ml}};
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_report(const Options& opt) {
    if (opt.input.empty() || opt.input == "-") {
        std::cout << summarize_csv(std::cin);
        return 0;
    }
    std::ifstream f(opt.input);
    if (!f) throw std::runtime_error("cannot read " + opt.input);
    std::cout << summarize_csv(f);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grover adaptive search ML decoding of polar codes"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);
    Cli cli;

    auto* encode = app.add_subcommand("encode", "encode bit strings read from stdin");
    cli.add_code(encode);
    auto* ml = app.add_subcommand("ml-decode", "exhaustive ML decoding of one instance");
    cli.add_instance(ml);
    auto* gas = app.add_subcommand("gas-decode", "GAS decoding of one instance; prints a JSON run record");
    cli.add_instance(gas);
    cli.add_gas(gas);
    gas->add_option("--out", cli.options().out, "output JSON (stdout when omitted)");
    auto* bler = app.add_subcommand("bler", "paired ML/GAS block error rate sweep");
    cli.add_batch(bler);
    auto* cdf = app.add_subcommand("cdf", "iterations-to-optimum distribution at one SNR point");
    cli.add_batch(cdf);
    auto* dict = app.add_subcommand("dict-verify", "exhaustive check of the quantum dictionary");
    cli.add_instance(dict);
    cli.add_gas(dict);
    dict->add_option("--threshold", cli.options().threshold, "threshold in objective units");
    auto* kasi = app.add_subcommand("baseline-kasi", "constraint-based QUBO baseline, brute-forced");
    cli.add_instance(kasi);
    auto* report = app.add_subcommand("report", "summarize a bler or cdf CSV");
    report->add_option("input", cli.options().input, "CSV path ('-' or omitted: stdin)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const Options& opt = cli.options();
        CLI::App* sub = app.get_subcommands().front();
        if (sub == report) return cmd_report(opt);
        auto cfg = cli.experiment(sub);
        if (sub == encode) return cmd_encode(cfg);
        if (sub == ml) return cmd_ml_decode(cfg, opt);
        if (sub == gas) return cmd_gas_decode(cfg, opt);
        if (sub == bler) return cmd_bler(cfg, opt);
        if (sub == cdf) return cmd_cdf(cfg, opt);
        if (sub == dict) return cmd_dict_verify(cfg, opt, sub->count("--scale-bits") > 0);
        if (sub == kasi) return cmd_baseline_kasi(cfg, opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
