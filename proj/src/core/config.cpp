#include "scn/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "scn/error.hpp"
#include "scn/numerics.hpp"

namespace scn {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view why) {
    raise(ErrorCode::ConfigError,
          "key '" + std::string(key) + "': cannot use value '" + std::string(value) + "' (" + std::string(why) + ")");
}

double parse_number(std::string_view key, std::string_view text) {
    const auto t = trim(text);
    if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || end != t.data() + t.size() || t.empty()) bad_value(key, text, "not a number");
    if (!std::isfinite(v)) bad_value(key, text, "not finite");
    return v;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
    const auto t = trim(text);
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || end != t.data() + t.size() || t.empty()) bad_value(key, text, "not a non-negative integer");
    return v;
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
    std::vector<double> out;
    std::string_view rest = trim(text);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        out.push_back(parse_number(key, rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest = trim(rest.substr(comma + 1));
        if (rest.empty()) bad_value(key, text, "trailing comma");
    }
    return out;
}

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_double(values[i]);
    }
    return out;
}

}  // namespace

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::vector<double> parse_grid(std::string_view text) {
    const auto t = trim(text);
    constexpr std::string_view kLog = "logspace:";
    if (t.substr(0, kLog.size()) == kLog) {
        std::vector<std::string_view> parts;
        std::string_view rest = t.substr(kLog.size());
        for (std::size_t colon; (colon = rest.find(':')) != std::string_view::npos; rest = rest.substr(colon + 1)) {
            parts.push_back(rest.substr(0, colon));
        }
        parts.push_back(rest);
        if (parts.size() != 3) bad_value("lambda_grid", text, "expected logspace:<lo_exp>:<hi_exp>:<count>");
        const double lo = parse_number("lambda_grid", parts[0]);
        const double hi = parse_number("lambda_grid", parts[1]);
        const auto count = parse_unsigned("lambda_grid", parts[2]);
        if (count == 0) return {};
        if (count == 1) return {std::pow(10.0, lo)};
        return numerics::logspace(std::pow(10.0, lo), std::pow(10.0, hi), count);
    }
    return parse_list("lambda_grid", t);
}

void ExperimentConfig::set(std::string_view key_in, std::string_view value) {
    const auto key = trim(key_in);
    if (key == "d1_km") {
        pathloss.d1_km = parse_number(key, value);
    } else if (key == "alpha_los") {
        pathloss.los_exponent = parse_number(key, value);
    } else if (key == "alpha_nlos") {
        pathloss.nlos_exponent = parse_number(key, value);
    } else if (key == "a_los_db") {
        pathloss.los_amplitude = db_to_linear(parse_number(key, value));
    } else if (key == "a_nlos_db") {
        pathloss.nlos_amplitude = db_to_linear(parse_number(key, value));
    } else if (key == "tx_power_dbm") {
        network.tx_power_mw = dbm_to_mw(parse_number(key, value));
    } else if (key == "noise_dbm") {
        network.noise_power_mw = dbm_to_mw(parse_number(key, value));
    } else if (key == "lambda_bs") {
        network.lambda_bs = parse_number(key, value);
    } else if (key == "rho_ue") {
        network.rho_ue = parse_number(key, value);
    } else if (key == "q_star") {
        q_star = parse_number(key, value);
    } else if (key == "lambda_grid") {
        lambda_grid = parse_grid(value);
    } else if (key == "gamma_db") {
        gamma_db = parse_list(key, value);
    } else if (key == "gamma0_db") {
        gamma0_db = parse_number(key, value);
    } else if (key == "trials") {
        trials = parse_unsigned(key, value);
    } else if (key == "seed") {
        seed = parse_unsigned(key, value);
    } else if (key == "window_side_km") {
        window_side_km = parse_number(key, value);
    } else {
        raise(ErrorCode::ConfigError, "unknown key '" + std::string(key) + "'");
    }
}

void ExperimentConfig::set(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        raise(ErrorCode::ConfigError, "expected key=value, got '" + std::string(assignment) + "'");
    }
    set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::vector<double> ExperimentConfig::resolved_lambda_grid() const {
    if (!lambda_grid) return numerics::logspace(std::pow(10.0, 0.5), 1e4, 15);
    if (lambda_grid->empty()) raise(ErrorCode::ConfigError, "key 'lambda_grid' is empty: the sweep has no rows");
    for (double l : *lambda_grid) {
        if (!(l > 0.0) || !std::isfinite(l)) bad_value("lambda_grid", format_double(l), "densities must be positive");
    }
    return *lambda_grid;
}

std::string ExperimentConfig::to_text() const {
    std::ostringstream os;
    os << "d1_km = " << format_double(pathloss.d1_km) << '\n'
       << "alpha_los = " << format_double(pathloss.los_exponent) << '\n'
       << "alpha_nlos = " << format_double(pathloss.nlos_exponent) << '\n'
       << "a_los_db = " << format_double(linear_to_db(pathloss.los_amplitude)) << '\n'
       << "a_nlos_db = " << format_double(linear_to_db(pathloss.nlos_amplitude)) << '\n'
       << "tx_power_dbm = " << format_double(linear_to_db(network.tx_power_mw)) << '\n'
       << "noise_dbm = " << format_double(linear_to_db(network.noise_power_mw)) << '\n'
       << "lambda_bs = " << format_double(network.lambda_bs) << '\n'
       << "rho_ue = " << format_double(network.rho_ue) << '\n'
       << "q_star = " << format_double(q_star) << '\n';
    if (lambda_grid) os << "lambda_grid = " << join(*lambda_grid) << '\n';
    os << "gamma_db = " << join(gamma_db) << '\n'
       << "gamma0_db = " << format_double(gamma0_db) << '\n'
       << "trials = " << trials << '\n'
       << "seed = " << seed << '\n'
       << "window_side_km = " << format_double(window_side_km) << '\n';
    return os.str();
}

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
    ExperimentConfig cfg;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.find('=') == std::string_view::npos) {
            raise(ErrorCode::ConfigError,
                  std::string(source) + ":" + std::to_string(line_no) + ": expected key = value");
        }
        try {
            cfg.set(line);
        } catch (const Error& e) {
            throw Error(ErrorCode::ConfigError, std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::IoError, "cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

void update_config_file(const std::filesystem::path& path, std::string_view key, std::string_view value) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::IoError, "cannot read config file " + path.string());
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    in.close();

    const std::string replacement = std::string(key) + " = " + std::string(value);
    bool replaced = false;
    for (auto& line : lines) {
        std::string_view body = line;
        if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
        const auto eq = body.find('=');
        if (eq != std::string_view::npos && trim(body.substr(0, eq)) == key) {
            line = replacement;
            replaced = true;
        }
    }
    if (!replaced) lines.push_back(replacement);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::IoError, "cannot write config file " + path.string());
    for (const auto& line : lines) out << line << '\n';
    if (!out) raise(ErrorCode::IoError, "failed writing " + path.string());
}

}  // namespace scn
