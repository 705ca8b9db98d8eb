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
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "gaspolar/baselines.hpp"
#include "gaspolar/gas.hpp"
#include "gaspolar/instance.hpp"

namespace gaspolar {

inline constexpr const char* kToolVersion = "0.3.0";

struct CodeSpec {
    std::size_t n_bits = 4;
    std::size_t k_bits = 2;
    std::vector<std::size_t> frozen{0, 2};

    PolarCode build() const { return PolarCode(n_bits, k_bits, frozen); }
};

/// Interleaver choice: identity, a seeded random permutation, or explicit.
struct InterleaverSpec {
    enum class Kind { identity, random, explicit_perm } kind = Kind::identity;
    std::uint64_t seed = 0;
    std::vector<std::size_t> perm;

    Interleaver build(std::size_t size) const {
        switch (kind) {
            case Kind::identity: return Interleaver::identity(size);
            case Kind::random: {
                Rng rng(seed);
                return Interleaver::random(size, rng);
            }
            case Kind::explicit_perm:
                if (perm.size() != size) {
                    throw ConfigurationError("interleaver permutation must have M*N entries");
                }
                return Interleaver(perm);
        }
        return Interleaver::identity(size);
    }
};

struct ExperimentConfig {
    CodeSpec code;
    std::string modulation = "bpsk";
    std::vector<double> snr_db{5.0};
    std::size_t trials = 1000;
    std::uint64_t master_seed = 1;
    GasConfig gas;
    InterleaverSpec interleaver;
    std::string out;

    void validate() const {
        if (trials < 1) throw ConfigurationError("trials must be >= 1");
        if (snr_db.empty()) throw ConfigurationError("snr_db list must not be empty");
        (void)code.build();
        (void)ModulationScheme::parse(modulation);
    }

    nlohmann::json to_json() const {
        nlohmann::json il;
        switch (interleaver.kind) {
            case InterleaverSpec::Kind::identity: il = "identity"; break;
            case InterleaverSpec::Kind::random: il = {{"random_seed", interleaver.seed}}; break;
            case InterleaverSpec::Kind::explicit_perm: il = interleaver.perm; break;
        }
        return {{"code", {{"n_bits", code.n_bits}, {"k_bits", code.k_bits}, {"frozen", code.frozen}}},
                {"modulation", modulation},
                {"snr_db", snr_db},
                {"trials", trials},
                {"master_seed", master_seed},
                {"backend", backend_name(gas.backend)},
                {"gas",
                 {{"lambda", gas.lambda},
                  {"patience", gas.patience},
                  {"max_classical_iterations", gas.max_classical_iterations},
                  {"m", gas.m},
                  {"scale_bits", gas.scale_bits},
                  {"use_diff", gas.use_diff}}},
                {"interleaver", il}};
    }
};

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << v;
    return ss.str();
}

inline nlohmann::json run_manifest(const ExperimentConfig& cfg, const std::string& command) {
    auto cj = cfg.to_json();
    return {{"tool", "gaspolar"},
            {"version", kToolVersion},
            {"command", command},
            {"master_seed", cfg.master_seed},
            {"config_hash", hex64(fnv1a64(cj.dump()))},
            {"config", cj}};
}

/// Worker count: GP_THREADS when set and positive, else hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("GP_THREADS")) {
        try {
            long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers. The first exception
/// thrown by any item is rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mu);
                    if (!error) error = std::current_exception();
                    next.store(n);
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

/// Wilson score interval at 95% confidence.
inline std::pair<double, double> wilson_interval(std::size_t errors, std::size_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double denom = 1.0 + z * z / n;
    const double centre = (p + z * z / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
    // The bounds are exactly 0 and 1 at the extremes; avoid rounding residue there.
    const double lo = errors == 0 ? 0.0 : std::max(0.0, centre - half);
    const double hi = errors == trials ? 1.0 : std::min(1.0, centre + half);
    return {lo, hi};
}

/// Outcome of one paired trial.
struct TrialOutcome {
    std::uint64_t channel_seed = 0;
    std::uint64_t decoder_seed = 0;
    bool ml_error = false;
    bool gas_error = false;
    bool gas_in_ml_argmin = false;
    bool ml_tie = false;
    ComplexityReport report;
};

/// Transmit, add noise, decode with brute-force ML and with GAS on the same y.
inline TrialOutcome run_paired_trial(const PolarCode& code, const ModulationScheme& mod, const Interleaver& il,
                                     const ChannelModel& channel, const GasConfig& gas, std::uint64_t channel_seed,
                                     std::uint64_t decoder_seed) {
    TrialOutcome out;
    out.channel_seed = channel_seed;
    out.decoder_seed = decoder_seed;
    Rng tx_rng(channel_seed);
    auto tx = random_transmission(code, mod, il, tx_rng);
    auto y = awgn_transmit(tx.symbols, channel, tx_rng);
    ProblemInstance inst(code, mod, std::move(y), il);

    auto ml = ml_decode_bruteforce(inst);
    out.ml_tie = ml.minimizers.size() > 1;
    out.ml_error = ml.info_bits.front() != tx.info_bits;

    Rng dec_rng(decoder_seed);
    auto res = gas_decode(inst, gas, dec_rng, &ml);
    out.gas_error = res.info_bits != tx.info_bits;
    out.gas_in_ml_argmin = ml.contains_info(res.info_bits);
    out.report = res.report;
    return out;
}

struct BlerPoint {
    double snr_db = 0.0;
    std::size_t trials = 0;
    std::size_t errors_ml = 0;
    std::size_t errors_gas = 0;
    std::size_t ml_ties = 0;
    std::size_t gas_not_ml = 0;  // GAS output outside the ML argmin set
    double bler_ml() const { return trials ? static_cast<double>(errors_ml) / static_cast<double>(trials) : 0.0; }
    double bler_gas() const { return trials ? static_cast<double>(errors_gas) / static_cast<double>(trials) : 0.0; }
    std::pair<double, double> ci() const { return wilson_interval(errors_ml, trials); }
};

inline std::uint64_t bler_trial_index(std::size_t point, std::size_t trial) {
    return (static_cast<std::uint64_t>(point) << 32) | static_cast<std::uint64_t>(trial);
}

inline std::vector<BlerPoint> run_bler(const ExperimentConfig& cfg, unsigned threads = worker_count()) {
    cfg.validate();
    const PolarCode code = cfg.code.build();
    const ModulationScheme mod = ModulationScheme::parse(cfg.modulation);
    const Interleaver il = cfg.interleaver.build(static_cast<std::size_t>(mod.bits_per_symbol()) * code.length());

    std::vector<BlerPoint> points;
    for (std::size_t p = 0; p < cfg.snr_db.size(); ++p) {
        const auto channel = ChannelModel::from_snr_db(cfg.snr_db[p]);
        std::vector<TrialOutcome> outcomes(cfg.trials);
        parallel_for(cfg.trials, threads, [&](std::size_t t) {
            auto idx = bler_trial_index(p, t);
            outcomes[t] = run_paired_trial(code, mod, il, channel, cfg.gas, derive_seed(cfg.master_seed, idx, 0),
                                           derive_seed(cfg.master_seed, idx, 1));
        });
        BlerPoint bp;
        bp.snr_db = cfg.snr_db[p];
        bp.trials = cfg.trials;
        for (const auto& o : outcomes) {
            bp.errors_ml += o.ml_error;
            bp.errors_gas += o.gas_error;
            bp.ml_ties += o.ml_tie;
            bp.gas_not_ml += !o.gas_in_ml_argmin;
        }
        points.push_back(bp);
    }
    return points;
}

inline std::string format_real(double v) {
    std::ostringstream ss;
    ss << std::setprecision(10) << v;
    return ss.str();
}

inline void write_bler_csv(std::ostream& os, const std::vector<BlerPoint>& points) {
    os << "snr_db,trials,errors_ml,errors_gas,bler_ml,bler_gas,ci_low,ci_high\n";
    for (const auto& p : points) {
        auto [lo, hi] = p.ci();
        os << format_real(p.snr_db) << ',' << p.trials << ',' << p.errors_ml << ',' << p.errors_gas << ','
           << format_real(p.bler_ml()) << ',' << format_real(p.bler_gas()) << ',' << format_real(lo) << ','
           << format_real(hi) << '\n';
    }
}

struct CdfTrial {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::size_t cd_at_opt = 0;
    std::size_t qd_at_opt = 0;
    bool censored = false;
};

struct CdfRecord {
    double snr_db = 0.0;
    std::size_t search_space_bits = 0;
    std::vector<CdfTrial> trials;

    std::size_t censored() const {
        return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [](const CdfTrial& t) { return t.censored; }));
    }
    std::size_t resolved() const { return trials.size() - censored(); }

    /// Empirical CDF over all trials (censored ones never count as reached):
    /// points (value, fraction of trials with metric <= value).
    std::vector<std::pair<std::size_t, double>> cdf(bool quantum) const {
        std::vector<std::size_t> vals;
        for (const auto& t : trials) {
            if (!t.censored) vals.push_back(quantum ? t.qd_at_opt : t.cd_at_opt);
        }
        std::sort(vals.begin(), vals.end());
        std::vector<std::pair<std::size_t, double>> out;
        const double n = static_cast<double>(trials.size());
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (i + 1 < vals.size() && vals[i + 1] == vals[i]) continue;
            out.emplace_back(vals[i], static_cast<double>(i + 1) / n);
        }
        return out;
    }

    /// Median with censored trials treated as +infinity.
    double median(bool quantum) const {
        std::vector<double> vals;
        for (const auto& t : trials) {
            vals.push_back(t.censored ? std::numeric_limits<double>::infinity()
                                      : static_cast<double>(quantum ? t.qd_at_opt : t.cd_at_opt));
        }
        if (vals.empty()) return 0.0;
        std::sort(vals.begin(), vals.end());
        const std::size_t n = vals.size();
        return n % 2 ? vals[n / 2] : 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
    }
};

/// CD/QD at which the incumbent first hits the ML argmin, per trial.
inline CdfRecord run_cdf(const ExperimentConfig& cfg, unsigned threads = worker_count()) {
    cfg.validate();
    if (cfg.snr_db.size() != 1) {
        throw ConfigurationError("cdf runs at a single SNR point; got " + std::to_string(cfg.snr_db.size()));
    }
    const PolarCode code = cfg.code.build();
    const ModulationScheme mod = ModulationScheme::parse(cfg.modulation);
    const Interleaver il = cfg.interleaver.build(static_cast<std::size_t>(mod.bits_per_symbol()) * code.length());
    const auto channel = ChannelModel::from_snr_db(cfg.snr_db.front());

    CdfRecord rec;
    rec.snr_db = cfg.snr_db.front();
    rec.search_space_bits = search_space_report(code, mod.bits_per_symbol(), Formulation::proposed);
    rec.trials.resize(cfg.trials);
    parallel_for(cfg.trials, threads, [&](std::size_t t) {
        auto cs = derive_seed(cfg.master_seed, t, 0);
        auto o = run_paired_trial(code, mod, il, channel, cfg.gas, cs, derive_seed(cfg.master_seed, t, 1));
        CdfTrial ct;
        ct.trial = t;
        ct.seed = cs;
        ct.censored = !o.report.reached_optimum;
        if (!ct.censored) {
            ct.cd_at_opt = *o.report.optimum_iteration;
            ct.qd_at_opt = *o.report.qd_at_optimum;
        }
        rec.trials[t] = ct;
    });
    return rec;
}

inline void write_cdf_csv(std::ostream& os, const CdfRecord& rec) {
    os << "trial,seed,cd_at_opt,qd_at_opt,censored\n";
    for (const auto& t : rec.trials) {
        os << t.trial << ',' << t.seed << ',';
        if (t.censored) {
            os << ",,1\n";
        } else {
            os << t.cd_at_opt << ',' << t.qd_at_opt << ",0\n";
        }
    }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace detail

/// Human-readable summary of a bler.csv or cdf.csv stream.
inline std::string summarize_csv(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) {
        throw InvalidInput("empty CSV");
    }
    std::ostringstream out;
    std::vector<std::vector<std::string>> rows;
    for (std::string line; std::getline(is, line);) {
        if (!line.empty()) rows.push_back(detail::split_csv_line(line));
    }
    if (header.rfind("snr_db,trials,errors_ml,errors_gas", 0) == 0) {
        out << "BLER summary (" << rows.size() << " SNR points)\n";
        out << std::left << std::setw(10) << "SNR[dB]" << std::setw(8) << "trials" << std::setw(12) << "BLER(ML)"
            << std::setw(12) << "BLER(GAS)" << std::setw(24) << "95% CI (ML)" << "verdict\n";
        for (const auto& r : rows) {
            if (r.size() < 8) throw InvalidInput("malformed bler row");
            double ml = std::stod(r[4]);
            double gas = std::stod(r[5]);
            double lo = std::stod(r[6]);
            double hi = std::stod(r[7]);
            bool inside = gas >= lo && gas <= hi;
            std::ostringstream ci;
            ci << '[' << std::setprecision(4) << lo << ", " << hi << ']';
            out << std::left << std::setw(10) << r[0] << std::setw(8) << r[1] << std::setw(12) << ml << std::setw(12)
                << gas << std::setw(24) << ci.str() << (inside ? "equivalent" : "DIFFERENT") << '\n';
        }
        return out.str();
    }
    if (header.rfind("trial,seed,cd_at_opt,qd_at_opt,censored", 0) == 0) {
        CdfRecord rec;
        for (const auto& r : rows) {
            if (r.size() < 5) throw InvalidInput("malformed cdf row");
            CdfTrial t;
            t.trial = std::stoul(r[0]);
            t.censored = r[4] == "1";
            if (!t.censored) {
                t.cd_at_opt = std::stoul(r[2]);
                t.qd_at_opt = std::stoul(r[3]);
            }
            rec.trials.push_back(t);
        }
        out << "CDF summary: " << rec.trials.size() << " trials, " << rec.resolved() << " resolved, "
            << rec.censored() << " censored\n";
        out << "median CD at optimum: " << rec.median(false) << "\n";
        out << "median QD at optimum: " << rec.median(true) << "\n";
        for (bool quantum : {false, true}) {
            out << (quantum ? "QD" : "CD") << " quantiles:";
            auto curve = rec.cdf(quantum);
            for (double q : {0.25, 0.5, 0.75, 0.9, 0.99}) {
                auto it = std::find_if(curve.begin(), curve.end(), [q](const auto& pt) { return pt.second >= q; });
                out << "  p" << static_cast<int>(q * 100) << '=';
                if (it == curve.end()) out << "inf";
                else out << it->first;
            }
            out << '\n';
        }
        return out.str();
    }
    throw InvalidInput("unrecognized CSV header: " + header);
}

}  // namespace gaspolar
