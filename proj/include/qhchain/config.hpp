#pragma once

#include "qhchain/hydro_bench.hpp"
#include "qhchain/lattice_model.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qhc {

// Flat key = value configuration.
//
//   # comment to end of line
//   key = value
//   list.key = 1, 2, 3
//
// Keys are dotted identifiers; each may appear once. Unknown keys are rejected.
class Config {
public:
    struct Entry {
        std::string value;
        int line = 0;
    };

    static Config parse(const std::string& text, const std::string& source = "<config>");
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return entries_.count(key) > 0; }
    void set(const std::string& key, const std::string& value);

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;
    std::vector<int> get_ints(const std::string& key, std::vector<int> fallback) const;
    std::vector<std::string> get_strings(const std::string& key, std::vector<std::string> fallback) const;

    // Location prefix "source:line" for diagnostics; "source" when the key is absent.
    std::string where(const std::string& key) const;
    const std::map<std::string, Entry>& entries() const { return entries_; }
    const std::string& source() const { return source_; }

    // Echo in canonical key order.
    std::string dump() const;

private:
    [[noreturn]] void fail(const std::string& key, const std::string& what) const;
    std::string source_;
    std::map<std::string, Entry> entries_;
};

// Default profiles: rbar = 0.5 sin(pi y), pbar = 0.5 cos(pi y), beta = 1 + 0.5 sin(pi y).
ChainSpec default_chain_spec();

ChainSpec chain_spec_from(const Config& cfg);
// Declared beta.min / beta.max if present, otherwise the profile range.
std::pair<double, double> beta_bounds_from(const Config& cfg, const ChainSpec& spec);

FmuOptions fmu_options_from(const Config& cfg);
HydroConfig hydro_config_from(const Config& cfg);
CovDecayConfig cov_decay_config_from(const Config& cfg);
SllnConfig slln_config_from(const Config& cfg);

}  // namespace qhc
