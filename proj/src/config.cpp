#include "tenad/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tenad {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_text(const std::string& text) {
    KeyValueConfig cfg;
    cfg.raw_ = text;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " +
                                        std::to_string(line_no) +
                                        " is not 'key = value': " + body);
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " +
                                        std::to_string(line_no) +
                                        " has an empty key");
        if (cfg.values_.count(key))
            throw std::invalid_argument("duplicate config key: " + key);
        cfg.values_[key] = value;
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::parse_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f)
        throw std::invalid_argument("cannot open config file: " +
                                    path.string());
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_text(buf.str());
}

bool KeyValueConfig::has(const std::string& key) const {
    return values_.count(key) != 0;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
    touched_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key,
                                  double fallback) const {
    touched_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(it->second, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key +
                                    "' is not a number: " + it->second);
    }
    if (used != it->second.size())
        throw std::invalid_argument("config key '" + key +
                                    "' is not a number: " + it->second);
    return v;
}

long KeyValueConfig::get_long(const std::string& key, long fallback) const {
    touched_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(it->second, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key +
                                    "' is not an integer: " + it->second);
    }
    if (used != it->second.size())
        throw std::invalid_argument("config key '" + key +
                                    "' is not an integer: " + it->second);
    return v;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key,
                                      std::uint64_t fallback) const {
    touched_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(it->second, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key +
                                    "' is not an unsigned integer: " +
                                    it->second);
    }
    if (used != it->second.size())
        throw std::invalid_argument("config key '" + key +
                                    "' is not an unsigned integer: " +
                                    it->second);
    return v;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
    touched_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config key '" + key +
                                "' is not a boolean: " + v);
}

std::vector<std::string> KeyValueConfig::keys_with_prefix(
    const std::string& prefix) const {
    std::vector<std::string> out;
    for (const auto& [key, value] : values_)
        if (key.rfind(prefix, 0) == 0) out.push_back(key);
    return out;
}

void KeyValueConfig::reject_unused() const {
    std::string unknown;
    for (const auto& [key, value] : values_)
        if (!touched_.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
    if (!unknown.empty())
        throw std::invalid_argument("unknown config keys: " + unknown);
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const std::string body = trim(item);
        if (body.empty())
            throw std::invalid_argument("empty entry in list: " + text);
        std::size_t used = 0;
        out.push_back(std::stod(body, &used));
        if (used != body.size())
            throw std::invalid_argument("bad number in list: " + body);
    }
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_double_list(text)) {
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v)
            throw std::invalid_argument("expected integers in list: " + text);
        out.push_back(i);
    }
    return out;
}

AttackConfig attack_config_from_kv(const KeyValueConfig& kv,
                                   const std::string& prefix,
                                   const AttackConfig& base) {
    AttackConfig cfg = base;
    cfg.rank = static_cast<int>(kv.get_long(prefix + "rank", cfg.rank));
    cfg.query_budget = kv.get_long(prefix + "query_budget", cfg.query_budget);
    cfg.alpha = kv.get_double(prefix + "alpha", cfg.alpha);
    cfg.beta = kv.get_double(prefix + "beta", cfg.beta);
    cfg.beta_floor = kv.get_double(prefix + "beta_floor", cfg.beta_floor);
    cfg.lambda_tol = kv.get_double(prefix + "lambda_tol", cfg.lambda_tol);
    cfg.lambda0_factor =
        kv.get_double(prefix + "lambda0_factor", cfg.lambda0_factor);
    cfg.lambda_cap_factor =
        kv.get_double(prefix + "lambda_cap_factor", cfg.lambda_cap_factor);
    const std::string init = kv.get_string(
        prefix + "init",
        cfg.init == InitMode::HosvdColumn ? "hosvd-column" : "gaussian");
    if (init == "hosvd-column")
        cfg.init = InitMode::HosvdColumn;
    else if (init == "gaussian")
        cfg.init = InitMode::Gaussian;
    else
        throw std::invalid_argument("bad init mode: " + init);
    if (kv.has(prefix + "init_q")) {
        const std::vector<int> q =
            parse_int_list(kv.get_string(prefix + "init_q", ""));
        if (q.size() != 4)
            throw std::invalid_argument("init_q needs 4 entries");
        for (int j = 0; j < 4; ++j) cfg.init_q[j] = q[j];
    }
    const std::string grad = kv.get_string(
        prefix + "grad_mode",
        cfg.grad_mode == GradMode::PerFactor ? "per-factor" : "chain-rule");
    if (grad == "per-factor")
        cfg.grad_mode = GradMode::PerFactor;
    else if (grad == "chain-rule")
        cfg.grad_mode = GradMode::ChainRule;
    else
        throw std::invalid_argument("bad grad_mode: " + grad);
    cfg.directions_per_step = static_cast<int>(
        kv.get_long(prefix + "directions_per_step", cfg.directions_per_step));
    cfg.seed = kv.get_u64(prefix + "seed", cfg.seed);
    cfg.clamp = kv.get_bool(prefix + "clamp", cfg.clamp);
    cfg.clamp_min = kv.get_double(prefix + "clamp_min", cfg.clamp_min);
    cfg.clamp_max = kv.get_double(prefix + "clamp_max", cfg.clamp_max);
    cfg.validate();
    return cfg;
}

}  // namespace tenad
