#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tenad/attack.hpp"

namespace tenad {

/// Flat `key = value` configuration text: UTF-8, one pair per line, `#`
/// starts a comment, blank lines ignored. Reads are tracked so that a
/// final check can reject keys nothing consumed (typo protection).
class KeyValueConfig {
public:
    static KeyValueConfig parse_text(const std::string& text);
    static KeyValueConfig parse_file(const std::filesystem::path& path);

    bool has(const std::string& key) const;

    std::string get_string(const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    std::uint64_t get_u64(const std::string& key,
                          std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

    /// Throws std::invalid_argument naming any key never read.
    void reject_unused() const;

    const std::string& raw_text() const { return raw_; }

private:
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> touched_;
    std::string raw_;
};

/// Reads AttackConfig fields `prefix + name` (rank, query_budget, alpha,
/// beta, beta_floor, lambda_tol, lambda0_factor, lambda_cap_factor, init,
/// init_q, grad_mode, directions_per_step, seed, clamp, clamp_min,
/// clamp_max) on top of `base`.
AttackConfig attack_config_from_kv(const KeyValueConfig& kv,
                                   const std::string& prefix,
                                   const AttackConfig& base = {});

std::vector<double> parse_double_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

}  // namespace tenad
